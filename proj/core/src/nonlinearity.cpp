#include "shapestab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "shapestab/format.hpp"

namespace shapestab {

namespace {

double pchip_end_slope(double h0, double h1, double d0, double d1) {
  double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if ((m > 0.0) != (d0 > 0.0) || d0 == 0.0) {
    m = 0.0;
  } else if ((d0 > 0.0) != (d1 > 0.0) && std::abs(m) > 3.0 * std::abs(d0)) {
    m = 3.0 * d0;
  }
  return m;
}

double parse_number(std::string_view text, std::string_view what) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("nonlinearity: bad " + std::string(what) + " '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("nonlinearity: bad " + std::string(what) + " '" + s + "'");
  }
  return v;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need >= 2 matching knots");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) throw std::invalid_argument("MonotoneCubic: non-finite knot");
    if (i > 0 && !(x_[i] > x_[i - 1])) throw std::invalid_argument("MonotoneCubic: knots must increase");
  }
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    d[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  m_.assign(n, 0.0);
  if (n == 2) {
    m_[0] = m_[1] = d[0];
  } else {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (d[k - 1] * d[k] <= 0.0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      m_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
    }
    m_[0] = pchip_end_slope(h[0], h[1], d[0], d[1]);
    m_[n - 1] = pchip_end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  }
  cumulative_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Exact integral of the Hermite cubic over a whole cell.
    cumulative_[i + 1] = cumulative_[i] + h[i] * (0.5 * (y_[i] + y_[i + 1]) + h[i] * (m_[i] - m_[i + 1]) / 12.0);
  }
}

std::size_t MonotoneCubic::cell(double s) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), s);
  auto i = static_cast<std::size_t>(it - x_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, x_.size() - 2);
}

double MonotoneCubic::value(double s) const {
  if (s <= x_.front()) return y_.front();
  if (s >= x_.back()) return y_.back();
  const std::size_t i = cell(s);
  const double h = x_[i + 1] - x_[i];
  const double t = (s - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * m_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
         (t3 - t2) * h * m_[i + 1];
}

double MonotoneCubic::derivative(double s) const {
  if (s <= x_.front() || s >= x_.back()) return 0.0;
  const std::size_t i = cell(s);
  const double h = x_[i + 1] - x_[i];
  const double t = (s - x_[i]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y_[i] + (-6 * t2 + 6 * t) * y_[i + 1]) / h + (3 * t2 - 4 * t + 1) * m_[i] +
         (3 * t2 - 2 * t) * m_[i + 1];
}

double MonotoneCubic::integral(double s) const {
  if (s <= x_.front()) return (s - x_.front()) * y_.front();
  if (s >= x_.back()) return cumulative_.back() + (s - x_.back()) * y_.back();
  const std::size_t i = cell(s);
  const double h = x_[i + 1] - x_[i];
  const double t = (s - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  const double part = (t4 / 2 - t3 + t) * y_[i] + (t4 / 4 - 2 * t3 / 3 + t2 / 2) * h * m_[i] +
                      (-t4 / 2 + t3) * y_[i + 1] + (t4 / 4 - t3 / 3) * h * m_[i + 1];
  return cumulative_[i] + h * part;
}

Nonlinearity Nonlinearity::torsion() { return {Kind::torsion, 0.0, 0.0}; }

Nonlinearity Nonlinearity::lane_emden(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("lane_emden: exponent must be > 1");
  return {Kind::lane_emden, p, 0.0};
}

Nonlinearity Nonlinearity::linear(double slope, double offset) {
  if (!std::isfinite(slope) || !std::isfinite(offset)) throw std::invalid_argument("linear: non-finite coefficient");
  return {Kind::linear, slope, offset};
}

Nonlinearity Nonlinearity::tabulated(std::vector<double> s, std::vector<double> f) {
  Nonlinearity nl(Kind::tabulated, 0.0, 0.0);
  nl.table_ = std::make_shared<const MonotoneCubic>(std::move(s), std::move(f));
  return nl;
}

Nonlinearity Nonlinearity::parse(std::string_view descriptor) {
  const auto colon = descriptor.find(':');
  const std::string_view name = descriptor.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : descriptor.substr(colon + 1);
  if (name == "torsion") {
    if (!args.empty()) throw std::invalid_argument("nonlinearity: torsion takes no parameters");
    return torsion();
  }
  if (name == "lane-emden" || name == "lane_emden") {
    if (args.empty()) throw std::invalid_argument("nonlinearity: lane-emden needs an exponent, e.g. lane-emden:3");
    return lane_emden(parse_number(args, "exponent"));
  }
  if (name == "linear") {
    const auto comma = args.find(',');
    if (args.empty() || comma == std::string_view::npos) {
      throw std::invalid_argument("nonlinearity: linear needs slope and offset, e.g. linear:0.5,1");
    }
    return linear(parse_number(args.substr(0, comma), "slope"), parse_number(args.substr(comma + 1), "offset"));
  }
  if (name == "tabulated") {
    if (args.empty()) throw std::invalid_argument("nonlinearity: tabulated needs a CSV path");
    std::ifstream in{std::string(args)};
    if (!in) throw std::invalid_argument("nonlinearity: cannot open '" + std::string(args) + "'");
    std::vector<double> s, f;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto c = line.find(',');
      if (c == std::string::npos) throw std::invalid_argument("nonlinearity: table rows need two columns");
      try {
        s.push_back(parse_number(line.substr(0, c), "table entry"));
        f.push_back(parse_number(line.substr(c + 1), "table entry"));
      } catch (const std::invalid_argument&) {
        if (!first) throw;
      }
      first = false;
    }
    auto nl = tabulated(std::move(s), std::move(f));
    nl.source_ = std::string(args);
    return nl;
  }
  throw std::invalid_argument("nonlinearity: unknown kind '" + std::string(name) + "'");
}

double Nonlinearity::f(double s) const {
  switch (kind_) {
    case Kind::torsion:
      return 1.0;
    case Kind::lane_emden:
      return std::copysign(std::pow(std::abs(s), a_), s);
    case Kind::linear:
      return a_ * s + b_;
    case Kind::tabulated:
      return table_->value(s);
  }
  return 0.0;
}

double Nonlinearity::df(double s) const {
  switch (kind_) {
    case Kind::torsion:
      return 0.0;
    case Kind::lane_emden:
      return a_ * std::pow(std::abs(s), a_ - 1.0);
    case Kind::linear:
      return a_;
    case Kind::tabulated:
      return table_->derivative(s);
  }
  return 0.0;
}

double Nonlinearity::F(double s) const {
  switch (kind_) {
    case Kind::torsion:
      return s;
    case Kind::lane_emden:
      return std::pow(std::abs(s), a_ + 1.0) / (a_ + 1.0);
    case Kind::linear:
      return 0.5 * a_ * s * s + b_ * s;
    case Kind::tabulated:
      return table_->integral(s) - table_->integral(0.0);
  }
  return 0.0;
}

bool Nonlinearity::is_nonnegative_increasing() const noexcept {
  switch (kind_) {
    case Kind::torsion:
    case Kind::lane_emden:
      return true;
    case Kind::linear:
      return a_ >= 0.0 && b_ >= 0.0;
    case Kind::tabulated: {
      const auto& y = table_->values();
      const bool increasing = std::is_sorted(y.begin(), y.end());
      return increasing && table_->value(0.0) >= 0.0;
    }
  }
  return false;
}

std::string Nonlinearity::descriptor() const {
  switch (kind_) {
    case Kind::torsion:
      return "torsion";
    case Kind::lane_emden:
      return "lane-emden:" + format_double(a_);
    case Kind::linear:
      return "linear:" + format_double(a_) + "," + format_double(b_);
    case Kind::tabulated:
      return "tabulated:" + source_;
  }
  return {};
}

}  // namespace shapestab
