#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace topocov {

// f : degree -> real with f(0) = 0. X_v = f(deg v).
//
// Kinds: constant(c), identity, power(λ) (d^λ; λ = -1/2 is Randić), table (values for degrees
// 1..L, extended linearly from the last two entries), shifted(base, c) (base - c on d >= 1).
//
// growth_bound() is the constant C in |f(d)| <= C d for d >= 1 when the function is known to be
// O(d); it is empty for power(λ > 1).
class VertexFunction {
public:
  struct Constant { double c; };
  struct Identity {};
  struct Power { double lambda; };
  struct Table { std::vector<double> values; };
  struct Shifted {
    std::shared_ptr<const VertexFunction> base;
    double c;
  };
  using Kind = std::variant<Constant, Identity, Power, Table, Shifted>;

  static VertexFunction constant(double c) { return VertexFunction(Constant{c}); }
  static VertexFunction identity() { return VertexFunction(Identity{}); }
  static VertexFunction power(double lambda) { return VertexFunction(Power{lambda}); }
  static VertexFunction randic() { return power(-0.5); }

  static VertexFunction table(std::vector<double> values) {
    if (values.empty())
      throw ParameterError("table function needs at least one value");
    for (double x : values)
      if (!std::isfinite(x))
        throw ParameterError("table values must be finite");
    return VertexFunction(Table{std::move(values)});
  }

  const Kind& kind() const noexcept { return kind_; }

  double operator()(std::size_t d) const { return eval(d); }

  double eval(std::size_t d) const {
    if (d == 0)
      return 0.0;
    const auto x = static_cast<double>(d);
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Constant>)
            return k.c;
          else if constexpr (std::is_same_v<K, Identity>)
            return x;
          else if constexpr (std::is_same_v<K, Power>)
            return std::pow(x, k.lambda);
          else if constexpr (std::is_same_v<K, Table>)
            return table_eval(k.values, d);
          else
            return k.base->eval(d) - k.c;
        },
        kind_);
  }

  std::optional<double> growth_bound() const {
    return std::visit(
        [](const auto& k) -> std::optional<double> {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Constant>)
            return std::abs(k.c);
          else if constexpr (std::is_same_v<K, Identity>)
            return 1.0;
          else if constexpr (std::is_same_v<K, Power>)
            return k.lambda <= 1.0 ? std::optional<double>(1.0) : std::nullopt;
          else if constexpr (std::is_same_v<K, Table>)
            return table_growth(k.values);
          else {
            const auto inner = k.base->growth_bound();
            if (!inner)
              return std::nullopt;
            return *inner + std::abs(k.c);
          }
        },
        kind_);
  }

  bool is_linearly_bounded() const { return growth_bound().has_value(); }

  // Canonical spec string; parse_function(f.to_spec()) evaluates identically to f.
  std::string to_spec() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Constant>)
            return "const:" + format_number(k.c);
          else if constexpr (std::is_same_v<K, Identity>)
            return "id";
          else if constexpr (std::is_same_v<K, Power>)
            return k.lambda == -0.5 ? std::string("randic") : "pow:" + format_number(k.lambda);
          else if constexpr (std::is_same_v<K, Table>) {
            std::string s = "table:";
            for (std::size_t i = 0; i < k.values.size(); ++i)
              s += (i ? "," : "") + format_number(k.values[i]);
            return s;
          } else
            return "shift:" + k.base->to_spec() + ":" + format_number(k.c);
        },
        kind_);
  }

  // Shortest round-trip decimal form.
  static std::string format_number(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(x);
  }

private:
  explicit VertexFunction(Kind k) : kind_(std::move(k)) {}

  friend VertexFunction shift(const VertexFunction& f, double c);

  static double table_eval(const std::vector<double>& v, std::size_t d) {
    const std::size_t len = v.size();
    if (d <= len)
      return v[d - 1];
    const double last = v[len - 1];
    const double prev = len >= 2 ? v[len - 2] : 0.0;
    return last + (last - prev) * static_cast<double>(d - len);
  }

  static double table_growth(const std::vector<double>& v) {
    const std::size_t len = v.size();
    double c = 0.0;
    for (std::size_t d = 1; d <= len; ++d)
      c = std::max(c, std::abs(v[d - 1]) / static_cast<double>(d));
    const double slope = v[len - 1] - (len >= 2 ? v[len - 2] : 0.0);
    return std::max(c, std::abs(slope));
  }

  Kind kind_;
};

// g(d) = f(d) - c for d >= 1, g(0) = 0.
inline VertexFunction shift(const VertexFunction& f, double c) {
  return VertexFunction(VertexFunction::Shifted{std::make_shared<const VertexFunction>(f), c});
}

namespace detail {

inline double parse_real(std::string_view s, std::string_view what) {
  double x = 0.0;
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(x))
    throw ParseError(0, "invalid number '" + std::string(s) + "' in " + std::string(what));
  return x;
}

} // namespace detail

// Function syntax: const:<c> | id | randic | pow:<λ> | table:<v1,v2,...> | shift:<inner>:<c>
// Table entries are the values at degrees 1, 2, ...
inline VertexFunction parse_function(std::string_view spec) {
  auto starts = [&](std::string_view p) { return spec.substr(0, p.size()) == p; };
  if (spec == "id")
    return VertexFunction::identity();
  if (spec == "randic")
    return VertexFunction::randic();
  if (starts("const:"))
    return VertexFunction::constant(detail::parse_real(spec.substr(6), "const"));
  if (starts("pow:"))
    return VertexFunction::power(detail::parse_real(spec.substr(4), "pow"));
  if (starts("table:")) {
    std::vector<double> values;
    auto body = spec.substr(6);
    while (true) {
      const auto comma = body.find(',');
      values.push_back(detail::parse_real(body.substr(0, comma), "table"));
      if (comma == std::string_view::npos)
        break;
      body.remove_prefix(comma + 1);
    }
    return VertexFunction::table(std::move(values));
  }
  if (starts("shift:")) {
    const auto body = spec.substr(6);
    const auto colon = body.rfind(':');
    if (colon == std::string_view::npos || colon == 0)
      throw ParseError(0, "expected shift:<inner>:<c>");
    return shift(parse_function(body.substr(0, colon)), detail::parse_real(body.substr(colon + 1), "shift"));
  }
  throw ParseError(0, "unknown function spec '" + std::string(spec) + "'");
}

} // namespace topocov
