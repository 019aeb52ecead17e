#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cqm/common.hpp"

namespace cqm {

enum class ModelKind {
  free_group,        // free(n)
  zd,                // Z^d with standard basis
  heisenberg,        // integer Heisenberg group, generators x, y
  cyclic,            // Z/p with generator u
  free_product_cyclic,  // Z/p * Z/q, generators u, v
  dihedral_infinity,    // Z/2 * Z/2 with the two involutions s, t
};

// Canonical normal form. Interpretation of `data` depends on the model:
//   free(n):    reduced word, letters in {-n..-1, 1..n}
//   zd(d):      d coordinates
//   heisenberg: (a,b,c) meaning x^a y^b z^c
//   cyclic(p):  single residue in [0,p)
//   free products: flattened alternating syllables [tag, exp, tag, exp, ...],
//                  tag in {1,2}, exp in [1, order-1]
// Equality and hashing look at the normal form alone.
struct GroupElement {
  std::vector<std::int64_t> data;
  std::uint64_t model_tag = 0;

  bool operator==(const GroupElement& o) const { return data == o.data; }
  bool operator!=(const GroupElement& o) const { return data != o.data; }
  bool operator<(const GroupElement& o) const { return data < o.data; }
};

struct ElementHash {
  std::size_t operator()(const GroupElement& e) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::int64_t v : e.data) {
      std::uint64_t u = static_cast<std::uint64_t>(v);
      for (int b = 0; b < 8; ++b) {
        h ^= (u >> (8 * b)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

// E_k = {x : l(x) = k}, deterministically ordered (lexicographic on normal
// forms) so matrix layouts are reproducible across runs.
struct SphereIndex {
  std::uint64_t model_tag = 0;
  int radius = 0;
  std::vector<GroupElement> elements;
  std::unordered_map<GroupElement, int, ElementHash> position;

  int size() const { return static_cast<int>(elements.size()); }
  // -1 when x is not on this sphere
  int index_of(const GroupElement& x) const {
    auto it = position.find(x);
    return it == position.end() ? -1 : it->second;
  }
};

struct Quadruple {
  GroupElement x, y, z, w;
  std::int64_t defect = 0;
};

struct FourPointResult {
  std::int64_t delta = 0;   // exhaustive: exact max; sampled: lower bound
  bool exhaustive = true;
  Quadruple witness;
  std::uint64_t trials = 0;  // sampled mode only
  std::uint64_t seed = 0;
};

enum class GrowthClass { polynomial, exponential };

struct GrowthResult {
  std::vector<std::int64_t> ball_sizes;  // |B_0| .. |B_pmax|
  double slope = 0.0;                    // log|B_p| vs log p on the top half
  GrowthClass classification = GrowthClass::polynomial;
  double loglog_residual = 0.0;  // relative residual of the log-log affine fit
  double semilog_residual = 0.0;  // relative residual of the log vs p fit
};

class GroupModel {
 public:
  static GroupModel free_group(int n);
  static GroupModel zd(int d);
  static GroupModel heisenberg();
  static GroupModel cyclic(int p);
  static GroupModel free_product_cyclic(int p, int q);
  static GroupModel dihedral_infinity();
  // Accepts e.g. "free2", "zd2", "heisenberg", "cyclic5", "fp3x2", "dihedral".
  static GroupModel parse(const std::string& spec);

  ModelKind kind() const { return kind_; }
  int param_a() const { return a_; }
  int param_b() const { return b_; }
  std::string spec_string() const;
  // Hash of the model spec plus the normal-form code version; keys all caches.
  std::string fingerprint() const;
  std::uint64_t tag() const { return tag_; }
  bool amenable() const;
  bool finite() const { return kind_ == ModelKind::cyclic; }

  // Generating set S, closed under inversion, identity excluded.
  std::vector<GroupElement> generators() const;

  GroupElement identity() const;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement invert(const GroupElement& a) const;
  // Word length. For heisenberg this is BFS-backed and may expand the
  // Cayley-ball enumeration on demand.
  std::int64_t length(const GroupElement& a) const;
  // Canonical geodesic generator word for a (indices into generators()).
  std::vector<int> geodesic_word(const GroupElement& a) const;

  std::string to_string(const GroupElement& a) const;
  GroupElement parse_element(const std::string& s) const;

  // Exact sphere E_k, cached in memory (and on disk when a cache dir is set).
  const SphereIndex& sphere(int k) const;
  // |B_0| .. |B_pmax|
  std::vector<std::int64_t> ball_sizes(int p_max) const;

  // Resource budgets; exceeding them raises resource_error.
  std::size_t max_sphere_elements = 2000000;
  std::uint64_t max_quadruples = 500000000ULL;

  void set_cache_dir(const std::string& dir) { cache_dir_ = dir; }
  const std::string& cache_dir() const { return cache_dir_; }

 private:
  GroupModel(ModelKind kind, int a, int b);

  void check_tag(const GroupElement& e) const;
  std::vector<GroupElement> enumerate_sphere(int k) const;
  void ensure_heisenberg_radius(int k) const;
  std::optional<std::vector<GroupElement>> load_sphere_cache(int k) const;
  void store_sphere_cache(int k, const std::vector<GroupElement>& elems) const;

  ModelKind kind_;
  int a_ = 0;  // n / d / p
  int b_ = 0;  // q for free products
  std::uint64_t tag_ = 0;
  std::string cache_dir_;

  struct HeisState {
    // BFS over the Cayley graph; lengths and parent edges for geodesics.
    std::unordered_map<GroupElement, std::pair<int, int>, ElementHash> info;
    std::vector<std::vector<GroupElement>> spheres;
    int radius = -1;
  };
  mutable std::mutex mu_;
  mutable std::map<int, std::shared_ptr<const SphereIndex>> sphere_cache_;
  mutable HeisState heis_;
};

// Hyperbolicity defect over quadruples of B_R (Def. of four-point delta):
//   max over (x,y,z,w) of rho(x,y)+rho(z,w) - max{rho(x,z)+rho(y,w),
//   rho(x,w)+rho(y,z)}, floored at 0.
FourPointResult four_point_delta_exhaustive(const GroupModel& model, int R);
FourPointResult four_point_delta_sampled(const GroupModel& model, int R,
                                         std::uint64_t trials, std::uint64_t seed);

// Splits x in E_m as x = xbar * xtil with l(xbar) = k - q, l(xtil) = n - qt,
// where p = k+n-m, q = floor(p/2), qt = p - q. Requires |m-n| <= k and
// |n-k| <= m. The split is the prefix/suffix cut of the canonical geodesic.
std::pair<GroupElement, GroupElement> geodesic_split(const GroupModel& model,
                                                     const GroupElement& x, int k,
                                                     int n, int m);

GrowthResult growth_exponent(const GroupModel& model, int p_max);

// Ball concatenation B_R with global indices (spheres laid out in order).
struct BallIndex {
  const GroupModel* model = nullptr;
  int R = 0;
  std::vector<int> offsets;  // offsets[k] = first index of E_k; size R+2
  int total = 0;

  BallIndex(const GroupModel& m, int radius);
  int degree_of(int global_index) const;
  const GroupElement& element(int global_index) const;
  // -1 when outside B_R
  int global_index(const GroupElement& x) const;
};

}  // namespace cqm
