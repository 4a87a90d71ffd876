#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace blab {

// Fixed-point decimal with two fractional digits. All stored quantities
// (temperatures, tide heights, magnitudes) use this type so file round trips
// are byte exact.
class Decimal {
 public:
  constexpr Decimal() = default;
  static constexpr Decimal from_cents(std::int64_t cents) {
    Decimal d;
    d.cents_ = cents;
    return d;
  }
  static constexpr Decimal from_int(std::int64_t units) {
    return from_cents(units * 100);
  }
  // Accepts "-12", "25.5", "1.80"; at most two fractional digits.
  static std::optional<Decimal> parse(const std::string& s) {
    if (s.empty()) return std::nullopt;
    size_t i = 0;
    bool neg = false;
    if (s[i] == '-' || s[i] == '+') {
      neg = s[i] == '-';
      ++i;
    }
    if (i >= s.size()) return std::nullopt;
    std::int64_t whole = 0;
    bool any = false;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
      whole = whole * 10 + (s[i] - '0');
      any = true;
    }
    std::int64_t frac = 0;
    if (i < s.size() && (s[i] == '.' || s[i] == ',')) {
      ++i;
      int digits = 0;
      for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
        if (++digits > 2) return std::nullopt;
        frac = frac * 10 + (s[i] - '0');
      }
      if (digits == 0) return std::nullopt;
      if (digits == 1) frac *= 10;
      any = true;
    }
    if (!any || i != s.size()) return std::nullopt;
    std::int64_t cents = whole * 100 + frac;
    return from_cents(neg ? -cents : cents);
  }

  constexpr std::int64_t cents() const { return cents_; }
  constexpr bool is_integral() const { return cents_ % 100 == 0; }
  double to_double() const { return static_cast<double>(cents_) / 100.0; }

  // "25.00", "1.80" — the storage form.
  std::string to_fixed2() const { return render('.', 2); }
  // "25", "1.8", "3.25" — trailing fractional zeros trimmed.
  std::string to_trimmed() const { return render('.', trimmed_digits()); }
  // pt-BR surface form with a decimal comma: "1,8".
  std::string to_trimmed_pt() const { return render(',', trimmed_digits()); }

  friend constexpr bool operator==(Decimal, Decimal) = default;
  friend constexpr auto operator<=>(Decimal a, Decimal b) {
    return a.cents_ <=> b.cents_;
  }

 private:
  int trimmed_digits() const {
    if (cents_ % 100 == 0) return 0;
    return cents_ % 10 == 0 ? 1 : 2;
  }
  std::string render(char sep, int digits) const {
    std::int64_t c = cents_ < 0 ? -cents_ : cents_;
    std::string out = cents_ < 0 ? "-" : "";
    out += std::to_string(c / 100);
    if (digits > 0) {
      out += sep;
      out += static_cast<char>('0' + (c / 10) % 10);
      if (digits > 1) out += static_cast<char>('0' + c % 10);
    }
    return out;
  }

  std::int64_t cents_ = 0;
};

}  // namespace blab
