#pragma once

#include <compare>
#include <string>

namespace tdcast {

// Calendar quarter, written as YYYYQn with n in 1..4.
struct Quarter {
  int year = 0;
  int index = 1;

  auto operator<=>(const Quarter&) const = default;

  int serial() const { return year * 4 + (index - 1); }
  Quarter next() const { return index == 4 ? Quarter{year + 1, 1} : Quarter{year, index + 1}; }
  std::string str() const;

  static Quarter from_serial(int serial);
  // Strict parse of YYYYQn; throws ParseError on bad format or index.
  static Quarter parse(const std::string& text);
};

}  // namespace tdcast
