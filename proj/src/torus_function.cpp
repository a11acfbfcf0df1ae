#include "kamlat/torus_function.hpp"

#include <cmath>

#include "kamlat/errors.hpp"
#include "nlohmann/json.hpp"

namespace kamlat {

TorusFunction TorusFunction::cosine(const SiteWindow& w, const Truncation& t, int site,
                                    double amp) {
  TorusFunction f(w, t);
  f.set(MultiIndex::unit(site, 1), Complex{amp / 2, 0.0});
  f.set(MultiIndex::unit(site, -1), Complex{amp / 2, 0.0});
  return f;
}

void TorusFunction::set(const MultiIndex& l, Complex v, MassLoss* loss) {
  if (!l.in_window(window_)) throw Error(ErrorKind::OutOfRange, "coefficient site outside window");
  if (!trunc_.admits(l)) {
    if (loss) {
      loss->fourier_tail += std::abs(v);
      return;
    }
    throw Error(ErrorKind::CapsExceeded, "multi-index beyond truncation caps");
  }
  if (v == Complex{0.0, 0.0}) {
    c_.erase(l);
    return;
  }
  c_[l] = v;
}

void TorusFunction::add(const MultiIndex& l, Complex v, MassLoss* loss) {
  if (!l.in_window(window_)) throw Error(ErrorKind::OutOfRange, "coefficient site outside window");
  if (!trunc_.admits(l)) {
    if (loss) {
      loss->fourier_tail += std::abs(v);
      return;
    }
    throw Error(ErrorKind::CapsExceeded, "multi-index beyond truncation caps");
  }
  auto [it, inserted] = c_.try_emplace(l, v);
  if (!inserted) {
    it->second += v;
    if (it->second == Complex{0.0, 0.0}) c_.erase(it);
  }
}

double TorusFunction::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [l, v] : c_) m = std::max(m, std::abs(v));
  return m;
}

void TorusFunction::prune(MassLoss* loss) {
  const double cut = trunc_.drop_rel * max_abs_coeff();
  if (cut <= 0.0) return;
  for (auto it = c_.begin(); it != c_.end();) {
    if (std::abs(it->second) < cut) {
      if (loss) loss->pruned += std::abs(it->second);
      it = c_.erase(it);
    } else {
      ++it;
    }
  }
}

double TorusFunction::norm(double sigma) const {
  double s = 0.0;
  for (const auto& [l, v] : c_) s += std::abs(v) * std::exp(sigma * l.eta_weight(window_));
  return s;
}

bool TorusFunction::is_real_symmetric(double tol) const {
  const double scale = std::max(max_abs_coeff(), 1e-300);
  for (const auto& [l, v] : c_) {
    Complex w = coeff(l.negated());
    if (std::abs(w - std::conj(v)) > tol * scale) return false;
  }
  return true;
}

Complex TorusFunction::evaluate(std::span<const double> angles) const {
  Complex s{0.0, 0.0};
  for (const auto& [l, v] : c_) {
    double phase = 0.0;
    for (const auto& [site, k] : l.entries())
      phase += k * angles[static_cast<size_t>(window_.index_of(site))];
    s += v * std::polar(1.0, phase);
  }
  return s;
}

TorusFunction TorusFunction::operator+(const TorusFunction& o) const {
  TorusFunction r = *this;
  for (const auto& [l, v] : o.c_) r.add(l, v);
  return r;
}

TorusFunction TorusFunction::operator-(const TorusFunction& o) const {
  TorusFunction r = *this;
  for (const auto& [l, v] : o.c_) r.add(l, -v);
  return r;
}

TorusFunction TorusFunction::scaled(Complex s) const {
  TorusFunction r(window_, trunc_);
  if (s == Complex{0.0, 0.0}) return r;
  for (const auto& [l, v] : c_) r.c_[l] = v * s;
  return r;
}

TorusFunction TorusFunction::derivative(int site) const {
  if (!window_.contains(site)) throw Error(ErrorKind::OutOfRange, "derivative site outside window");
  TorusFunction r(window_, trunc_);
  for (const auto& [l, v] : c_) {
    int k = l.value_at(site);
    if (k != 0) r.c_[l] = v * Complex{0.0, static_cast<double>(k)};
  }
  return r;
}

TorusFunction TorusFunction::multiply(const TorusFunction& o, MassLoss* loss) const {
  if (!(window_ == o.window_))
    throw Error(ErrorKind::Config, "multiply: window mismatch");
  TorusFunction r(window_, trunc_);
  MassLoss local;
  for (const auto& [la, va] : c_)
    for (const auto& [lb, vb] : o.c_) r.add(la.plus(lb), va * vb, &local);
  r.prune(&local);
  if (loss) loss->merge(local);
  return r;
}

TorusFunction TorusFunction::zero_average_part() const {
  TorusFunction r = *this;
  r.c_.erase(MultiIndex{});
  return r;
}

std::string TorusFunction::to_json_string() const {
  nlohmann::json j;
  j["window"] = {{"n", window_.n_max}, {"eta", window_.eta}};
  auto arr = nlohmann::json::array();
  for (const auto& [l, v] : c_) {
    auto idx = nlohmann::json::array();
    for (const auto& [site, val] : l.entries()) idx.push_back({site, val});
    arr.push_back({{"idx", idx}, {"re", v.real()}, {"im", v.imag()}});
  }
  j["coeffs"] = arr;
  return j.dump();
}

TorusFunction TorusFunction::from_json_string(const std::string& text, const Truncation& t) {
  nlohmann::json j = nlohmann::json::parse(text);
  SiteWindow w(j.at("window").at("n").get<int>(), j.at("window").at("eta").get<double>());
  TorusFunction f(w, t);
  for (const auto& c : j.at("coeffs")) {
    std::vector<MultiIndex::Entry> entries;
    for (const auto& e : c.at("idx")) entries.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    f.set(MultiIndex(std::move(entries)), Complex{c.at("re").get<double>(), c.at("im").get<double>()});
  }
  return f;
}

}  // namespace kamlat
