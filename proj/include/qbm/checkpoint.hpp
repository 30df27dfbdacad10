#ifndef QBM_CHECKPOINT_HPP
#define QBM_CHECKPOINT_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

// Versioned JSON store for converged orbital data, keyed by
// (dimension, N, lambda, gamma, basis signature). Scans use it to warm-start
// neighboring points: an exact hit restores the matrix directly, otherwise the
// nearest entry with the same (dimension, N, basis) is offered.

namespace qbm {

struct CheckpointKey {
  int dimension = 1;
  int particles = 0;
  double lambda = 0.0;
  double gamma = 1.0;
  std::string basis;  // e.g. "fedvr:nb=423:half=12.5" or "fd:shells=8"

  bool same_basis(const CheckpointKey& o) const {
    return dimension == o.dimension && particles == o.particles && basis == o.basis;
  }
};

class CheckpointStore {
 public:
  // Binds to a file path; loads existing contents when present. A malformed
  // or wrong-version file raises std::runtime_error rather than silently
  // clobbering data.
  explicit CheckpointStore(std::string path);

  // Exact-key lookup (lambda and gamma matched to 1e-12 relative).
  std::optional<Eigen::MatrixXd> find(const CheckpointKey& key) const;
  // Entry with the same (dimension, N, basis) minimizing the (lambda, gamma)
  // distance; empty when no compatible entry exists.
  std::optional<Eigen::MatrixXd> find_nearest(const CheckpointKey& key) const;

  // Inserts or replaces the entry for the key.
  void put(const CheckpointKey& key, const Eigen::MatrixXd& data);

  // All stored keys (for callers that must recover a basis signature before
  // they can build a matching grid).
  std::vector<CheckpointKey> keys() const;

  std::size_t size() const { return entries_.size(); }
  const std::string& path() const { return path_; }

  // Writes the store back to its file (atomically via a temp file).
  void save() const;

 private:
  struct Entry {
    CheckpointKey key;
    Eigen::MatrixXd data;
  };
  std::string path_;
  std::vector<Entry> entries_;
};

}  // namespace qbm

#endif
