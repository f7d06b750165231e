#include "tdcast/quarter.hpp"

#include <cctype>
#include <cstdio>

#include "tdcast/errors.hpp"

namespace tdcast {

std::string Quarter::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04dQ%d", year, index);
  return buf;
}

Quarter Quarter::from_serial(int serial) { return Quarter{serial / 4, serial % 4 + 1}; }

Quarter Quarter::parse(const std::string& text) {
  const bool shape_ok = text.size() == 6 && std::isdigit(static_cast<unsigned char>(text[0])) &&
                        std::isdigit(static_cast<unsigned char>(text[1])) &&
                        std::isdigit(static_cast<unsigned char>(text[2])) &&
                        std::isdigit(static_cast<unsigned char>(text[3])) && text[4] == 'Q' &&
                        std::isdigit(static_cast<unsigned char>(text[5]));
  if (!shape_ok) throw ParseError("unknown quarter format: '" + text + "' (expected YYYYQn)");
  const int year = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
  const int index = text[5] - '0';
  if (index < 1 || index > 4) throw ParseError("quarter index out of range: '" + text + "'");
  return Quarter{year, index};
}

}  // namespace tdcast
