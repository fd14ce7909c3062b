#include "revnorm/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "revnorm/error.hpp"

namespace revnorm {

std::vector<ModeIndex> truncated_index_set(int d, int K, int n_species) {
  if (d < 1 || d > kMaxDim) throw DomainError("truncated_index_set: d out of range");
  if (K < 0 || K > kMaxLattice) throw DomainError("truncated_index_set: K out of range");
  if (n_species < 1 || n_species > kMaxSpecies + 1) throw DomainError("truncated_index_set: bad species count");
  std::vector<ModeIndex> out;
  std::vector<int> a(static_cast<std::size_t>(d), -K);
  const int side = 2 * K + 1;
  std::size_t points = 1;
  for (int i = 0; i < d; ++i) points *= static_cast<std::size_t>(side);
  out.reserve(points * 2 * static_cast<std::size_t>(n_species));
  for (int sp = 0; sp < n_species; ++sp) {
    for (std::size_t p = 0; p < points; ++p) {
      std::size_t rem = p;
      for (int i = d - 1; i >= 0; --i) {
        a[static_cast<std::size_t>(i)] = static_cast<int>(rem % static_cast<std::size_t>(side)) - K;
        rem /= static_cast<std::size_t>(side);
      }
      out.emplace_back(std::span<const int>(a), +1, sp);
      out.emplace_back(std::span<const int>(a), -1, sp);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::shared_ptr<const IndexSet> IndexSet::box(int d, int K, int n_species) {
  std::shared_ptr<IndexSet> set(new IndexSet());
  set->modes_ = truncated_index_set(d, K, n_species);
  set->dim_ = d;
  set->K_ = K;
  set->n_species_ = n_species;
  set->index();
  return set;
}

std::shared_ptr<const IndexSet> IndexSet::from_modes(std::vector<ModeIndex> modes) {
  if (modes.empty()) throw DomainError("IndexSet: empty");
  std::sort(modes.begin(), modes.end());
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
  std::shared_ptr<IndexSet> set(new IndexSet());
  set->modes_ = std::move(modes);
  set->dim_ = set->modes_.front().dim();
  int species = 0;
  for (auto j : set->modes_) {
    if (j.dim() != set->dim_) throw DomainError("IndexSet: mixed lattice dimensions");
    species = std::max(species, j.species());
  }
  set->n_species_ = species + 1;
  set->index();
  return set;
}

void IndexSet::index() {
  pos_.clear();
  pos_.reserve(modes_.size() * 2);
  for (std::size_t i = 0; i < modes_.size(); ++i) pos_.emplace(modes_[i].code(), i);
  conj_pos_.resize(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    auto it = pos_.find(modes_[i].conj().code());
    if (it == pos_.end()) throw DomainError("IndexSet: not closed under conjugation at " + modes_[i].to_string());
    conj_pos_[i] = it->second;
  }
}

std::optional<std::size_t> IndexSet::find(ModeIndex j) const {
  auto it = pos_.find(j.code());
  if (it == pos_.end()) return std::nullopt;
  return it->second;
}

std::size_t IndexSet::position(ModeIndex j) const {
  auto it = pos_.find(j.code());
  if (it == pos_.end()) throw DomainError("index " + j.to_string() + " outside the truncated index set");
  return it->second;
}

bool same_index_set(const IndexSetPtr& a, const IndexSetPtr& b) {
  if (!a || !b) return false;
  return a == b || *a == *b;
}

StateVector::StateVector(IndexSetPtr set) : set_(std::move(set)) {
  if (!set_) throw DomainError("StateVector: null index set");
  values_.assign(set_->size(), cplx{});
}

StateVector::StateVector(IndexSetPtr set, std::vector<cplx> values) : set_(std::move(set)), values_(std::move(values)) {
  if (!set_) throw DomainError("StateVector: null index set");
  if (values_.size() != set_->size()) throw DomainError("StateVector: value count does not match index set");
}

StateVector rho(const StateVector& z) {
  StateVector out(z.index_set());
  const auto& set = *z.index_set();
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[set.conj_position(i)];
  return out;
}

StateVector conjugate(const StateVector& z) {
  StateVector out(z.index_set());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::conj(z[i]);
  return out;
}

double sobolev_norm(const StateVector& z, double s) {
  if (s < 0) throw DomainError("sobolev_norm: s must be >= 0");
  const auto& set = *z.index_set();
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    acc += std::pow(static_cast<double>(set.mode(i).weight_sq()), s) * std::norm(z[i]);
  }
  return std::sqrt(acc);
}

double sobolev_distance(const StateVector& a, const StateVector& b, double s) {
  if (!same_index_set(a.index_set(), b.index_set())) throw DomainError("sobolev_distance: index sets differ");
  const auto& set = *a.index_set();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::pow(static_cast<double>(set.mode(i).weight_sq()), s) * std::norm(a[i] - b[i]);
  }
  return std::sqrt(acc);
}

double reality_defect(const StateVector& z, double s) {
  const auto& set = *z.index_set();
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    acc += std::pow(static_cast<double>(set.mode(i).weight_sq()), s) * std::norm(z[set.conj_position(i)] - std::conj(z[i]));
  }
  return std::sqrt(acc);
}

bool is_real_state(const StateVector& z, double tol) {
  return reality_defect(z, 0.0) <= tol * (1.0 + sobolev_norm(z, 0.0));
}

FrequencyMap::FrequencyMap(IndexSetPtr set, const std::unordered_map<ModeIndex, double>& positive_values)
    : set_(std::move(set)) {
  if (!set_) throw DomainError("FrequencyMap: null index set");
  values_.assign(set_->size(), 0.0);
  for (std::size_t i = 0; i < set_->size(); ++i) {
    const ModeIndex j = set_->mode(i);
    auto it = positive_values.find(j.positive());
    if (it == positive_values.end()) throw DomainError("FrequencyMap: no frequency for " + j.positive().to_string());
    values_[i] = j.delta() > 0 ? it->second : -it->second;
  }
}

FrequencyMap::FrequencyMap(IndexSetPtr set, std::vector<double> values) : set_(std::move(set)), values_(std::move(values)) {
  if (!set_) throw DomainError("FrequencyMap: null index set");
  if (values_.size() != set_->size()) throw DomainError("FrequencyMap: value count does not match index set");
  if (!antisymmetric()) throw DomainError("FrequencyMap: omega_{conj j} != -omega_j");
}

bool FrequencyMap::antisymmetric() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[set_->conj_position(i)] != -values_[i]) return false;
  }
  return true;
}

double FrequencyMap::growth_constant(double m) const {
  double c = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    c = std::max(c, std::abs(values_[i]) / std::pow(weight(set_->mode(i)), m));
  }
  return c;
}

double omega_sum(const MultiIndex& jj, const FrequencyMap& omega) {
  const auto codes = jj.codes();
  const auto& set = *omega.index_set();
  double acc = 0.0;
  std::size_t i = 0;
  while (i < codes.size()) {
    const std::uint32_t base = codes[i] & ~1u;
    int net = 0;
    while (i < codes.size() && (codes[i] & ~1u) == base) {
      net += (codes[i] & 1u) ? -1 : 1;
      ++i;
    }
    const auto pos = set.position(ModeIndex::from_code(base));
    if (net != 0) acc += net * omega[pos];
  }
  return acc;
}

}  // namespace revnorm
