#include "ntunet/core.hpp"

#include <map>
#include <mutex>

namespace ntunet {

namespace {

struct CustomEntry {
  int dim;
  bool symmetric;
  std::function<Vector(const Vector&, const Vector&)> fn;
};

std::map<std::string, CustomEntry>& registry() {
  static std::map<std::string, CustomEntry> reg;
  return reg;
}
std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

const CustomEntry& lookup(const std::string& key) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto it = registry().find(key);
  if (it == registry().end())
    throw std::invalid_argument("pairwise transform not registered: " + key);
  return it->second;
}

}  // namespace

PairwiseTransform PairwiseTransform::custom(const std::string& key) {
  const CustomEntry& e = lookup(key);
  PairwiseTransform w;
  w.kind = Kind::Custom;
  w.dim = e.dim;
  w.key = key;
  return w;
}

bool PairwiseTransform::symmetric() const {
  switch (kind) {
    case Kind::SymmetricAbsDiff: return true;
    case Kind::AsymmetricLastCoord: return false;
    case Kind::Custom: return lookup(key).symmetric;
  }
  return true;
}

void register_pairwise(const std::string& key, int dim, bool symmetric,
                       std::function<Vector(const Vector&, const Vector&)> fn) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[key] = CustomEntry{dim, symmetric, std::move(fn)};
}

Vector pairwise_index(const PairwiseTransform& w, const Vector& x_i, const Vector& x_j) {
  if (x_i.size() != x_j.size())
    throw std::invalid_argument("pairwise_index: covariate vectors differ in length");
  switch (w.kind) {
    case PairwiseTransform::Kind::SymmetricAbsDiff: {
      if (x_i.size() != w.dim)
        throw std::invalid_argument("pairwise_index: covariate length does not match d");
      return (x_i - x_j).cwiseAbs();
    }
    case PairwiseTransform::Kind::AsymmetricLastCoord: {
      if (x_i.size() != w.dim)
        throw std::invalid_argument("pairwise_index: covariate length does not match d");
      const Index d = x_i.size();
      Vector out = (x_i - x_j).cwiseAbs();
      out[d - 1] = std::abs(2.0 * x_i[d - 1] - x_j[d - 1]) * (2.0 / 3.0);
      return out;
    }
    case PairwiseTransform::Kind::Custom: {
      const CustomEntry& e = lookup(w.key);
      Vector out = e.fn(x_i, x_j);
      if (out.size() != e.dim)
        throw std::invalid_argument("pairwise_index: custom transform returned wrong dimension");
      return out;
    }
  }
  throw std::logic_error("pairwise_index: unknown transform kind");
}

double NetworkData::density() const {
  const Index m = n();
  if (m < 2) return 0.0;
  long links = 0;
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j) links += adjacency(i, j);
  return static_cast<double>(links) / (static_cast<double>(m) * (m - 1) / 2.0);
}

void NetworkData::validate() const {
  const Index m = adjacency.rows();
  if (adjacency.cols() != m) throw std::invalid_argument("NetworkData: adjacency not square");
  if (covariates.rows() != m)
    throw std::invalid_argument("NetworkData: covariate rows do not match node count");
  for (Index i = 0; i < m; ++i) {
    if (adjacency(i, i) != 0) throw std::invalid_argument("NetworkData: nonzero diagonal");
    for (Index j = i + 1; j < m; ++j) {
      const int a = adjacency(i, j);
      if (a != 0 && a != 1) throw std::invalid_argument("NetworkData: entries must be 0/1");
      if (a != adjacency(j, i)) throw std::invalid_argument("NetworkData: adjacency not symmetric");
    }
  }
  if (!covariates.allFinite())
    throw std::invalid_argument("NetworkData: covariates contain non-finite entries");
}

}  // namespace ntunet
