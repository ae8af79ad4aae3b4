#include "fbmlt/model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fbmlt/error.hpp"
#include "fbmlt/special.hpp"

namespace fbmlt {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DomainError("multi-index must have length d >= 1");
  for (int e : entries_) {
    if (e < 0) throw DomainError("multi-index entries must be non-negative");
  }
  order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex MultiIndex::leading(int d, int order) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  std::vector<int> e(static_cast<std::size_t>(d), 0);
  e[0] = order;
  return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ',';
    os << entries_[i];
  }
  return os.str();
}

MultiIndex parse_multi_index(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw DomainError("bad multi-index entry '" + item + "'");
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw DomainError("bad multi-index entry '" + item + "'");
    }
  }
  return MultiIndex(std::move(out));
}

void require_hurst(double H) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
}

ModelConfig::ModelConfig(double hurst, MultiIndex index, double horizon)
    : H(hurst), k(std::move(index)), t(horizon) {
  require_hurst(H);
  if (!(t > 0.0)) throw DomainError("horizon t must be positive");
}

bool ModelConfig::dilt_exists() const noexcept { return 2.0 * k.order() * H + H * d() < 2.0; }

bool ModelConfig::dslt_exists() const noexcept { return H * k.order() + H * d() < 1.0; }

double ModelConfig::theta() const noexcept {
  return k.order() + k.order() * H + H * d();
}

MollifierSpec::MollifierSpec(double bandwidth, MultiIndex index) : eps(bandwidth), k(std::move(index)) {
  if (!(eps > 0.0)) throw DomainError("mollifier bandwidth eps must be positive");
}

double mollifier_deriv(const MollifierSpec& spec, std::span<const double> x) {
  if (!(spec.eps > 0.0)) throw DomainError("mollifier bandwidth eps must be positive");
  if (static_cast<int>(x.size()) != spec.k.dim()) {
    throw DomainError("mollifier_deriv: point dimension does not match multi-index");
  }
  const double root = std::sqrt(spec.eps);
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * spec.eps);
  double value = 1.0;
  for (int j = 0; j < spec.k.dim(); ++j) {
    const int kj = spec.k[j];
    const double y = x[static_cast<std::size_t>(j)] / root;
    const double sign = (kj % 2) ? -1.0 : 1.0;
    value *= norm * sign * std::pow(root, -kj) * hermite(kj, y) * std::exp(-0.5 * y * y);
  }
  return value;
}

double fbm_cov(double s, double t, double H) {
  require_hurst(H);
  if (s < 0.0 || t < 0.0) throw DomainError("fbm_cov: negative time");
  const double h2 = 2.0 * H;
  return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::abs(t - s), h2));
}

}  // namespace fbmlt
