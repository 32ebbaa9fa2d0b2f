#include "sheafenergy/barcode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace sheafenergy {

Rational parse_rational(const std::string& s) {
  size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      size_t used = 0;
      int64_t n = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing characters");
      return Rational(n, 1);
    }
    size_t used = 0;
    int64_t n = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument("bad numerator");
    int64_t d = std::stoll(s.substr(slash + 1), &used);
    if (used != s.size() - slash - 1) throw std::invalid_argument("bad denominator");
    return Rational(n, d);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

Bar::Bar(double b, double d, int deg, int mult)
    : birth(b), death(d), degree(deg), multiplicity(mult) {
  if (!(birth < death)) throw std::invalid_argument("bar requires birth < death");
  if (!std::isfinite(birth)) throw std::invalid_argument("bar birth must be finite");
  if (multiplicity < 1) throw std::invalid_argument("bar multiplicity must be >= 1");
}

bool operator==(const Bar& a, const Bar& b) {
  return a.birth == b.birth && a.death == b.death && a.degree == b.degree &&
         a.multiplicity == b.multiplicity;
}

namespace {
bool bar_key_less(const Bar& a, const Bar& b) {
  return std::tie(a.birth, a.death, a.degree) < std::tie(b.birth, b.death, b.degree);
}
bool bar_key_equal(const Bar& a, const Bar& b) {
  return a.birth == b.birth && a.death == b.death && a.degree == b.degree;
}
}  // namespace

Barcode::Barcode(std::vector<Bar> bars) : bars_(std::move(bars)) { canonicalize(); }

Barcode Barcode::single(double birth, double death, int degree, int mult) {
  return Barcode({Bar(birth, death, degree, mult)});
}

void Barcode::add(Bar bar) {
  bars_.push_back(std::move(bar));
  canonicalize();
}

void Barcode::canonicalize() {
  for (const Bar& b : bars_) {
    if (!(b.birth < b.death)) throw std::invalid_argument("bar requires birth < death");
    if (b.multiplicity < 1) throw std::invalid_argument("bar multiplicity must be >= 1");
  }
  std::sort(bars_.begin(), bars_.end(), bar_key_less);
  std::vector<Bar> merged;
  for (Bar& b : bars_) {
    if (!merged.empty() && bar_key_equal(merged.back(), b))
      merged.back().multiplicity += b.multiplicity;
    else
      merged.push_back(std::move(b));
  }
  bars_ = std::move(merged);
}

int Barcode::total_multiplicity() const {
  int n = 0;
  for (const Bar& b : bars_) n += b.multiplicity;
  return n;
}

bool Barcode::has_ray() const {
  return std::any_of(bars_.begin(), bars_.end(), [](const Bar& b) { return b.is_ray(); });
}

double Barcode::max_length() const {
  double m = 0.0;
  for (const Bar& b : bars_) m = std::max(m, b.length());
  return m;
}

bool operator==(const Barcode& a, const Barcode& b) { return a.bars_ == b.bars_; }

bool Barcode::approx_equal(const Barcode& other, double tol) const {
  if (bars_.size() != other.bars_.size()) return false;
  for (size_t i = 0; i < bars_.size(); ++i) {
    const Bar& x = bars_[i];
    const Bar& y = other.bars_[i];
    if (x.degree != y.degree || x.multiplicity != y.multiplicity) return false;
    if (std::abs(x.birth - y.birth) > tol) return false;
    if (x.is_ray() != y.is_ray()) return false;
    if (!x.is_ray() && std::abs(x.death - y.death) > tol) return false;
  }
  return true;
}

namespace {

nlohmann::json endpoint_to_json(double value, const std::optional<Rational>& exact,
                                bool allow_inf) {
  if (allow_inf && value == kInf) return "inf";
  if (exact) return exact->str();
  return value;
}

void endpoint_from_json(const nlohmann::json& j, bool allow_inf, double& value,
                        std::optional<Rational>& exact) {
  exact.reset();
  if (j.is_number()) {
    value = j.get<double>();
    return;
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") {
      if (!allow_inf) throw std::invalid_argument("birth cannot be inf");
      value = kInf;
      return;
    }
    Rational r = parse_rational(s);
    exact = r;
    value = r.value();
    return;
  }
  throw std::invalid_argument("endpoint must be a number or string");
}

}  // namespace

std::string Barcode::to_json() const {
  nlohmann::json bars = nlohmann::json::array();
  for (const Bar& b : bars_) {
    nlohmann::json jb;
    jb["birth"] = endpoint_to_json(b.birth, b.birth_exact, false);
    jb["death"] = endpoint_to_json(b.death, b.death_exact, true);
    jb["degree"] = b.degree;
    jb["mult"] = b.multiplicity;
    bars.push_back(jb);
  }
  nlohmann::json out;
  out["bars"] = bars;
  return out.dump();
}

Barcode Barcode::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("bars") || !j["bars"].is_array())
    throw std::invalid_argument("barcode JSON requires a \"bars\" array");
  std::vector<Bar> bars;
  for (const auto& jb : j["bars"]) {
    Bar b;
    endpoint_from_json(jb.at("birth"), false, b.birth, b.birth_exact);
    endpoint_from_json(jb.at("death"), true, b.death, b.death_exact);
    b.degree = jb.value("degree", 0);
    b.multiplicity = jb.value("mult", 1);
    if (!(b.birth < b.death)) throw std::invalid_argument("bar requires birth < death");
    if (b.multiplicity < 1) throw std::invalid_argument("bar multiplicity must be >= 1");
    bars.push_back(std::move(b));
  }
  return Barcode(std::move(bars));
}

}  // namespace sheafenergy
