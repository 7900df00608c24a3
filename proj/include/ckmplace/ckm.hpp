#ifndef CKMPLACE_CKM_HPP
#define CKMPLACE_CKM_HPP

#include "ckmplace/geometry.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

namespace ckmplace {

/// How off-grid queries are resolved against the map nodes.
enum class Lookup {
  nearest,  ///< value of the nearest node (ties toward smaller x, then y)
  bilinear, ///< bilinear blend of the four surrounding nodes, in dB
};

/// Discrete channel knowledge map for one ground base station.
///
/// Nodes lie on a uniform square lattice `origin + (i, j) * spacing`,
/// i in [0, nx), j in [0, ny). Gains are large-scale power gains in dB and
/// are converted to linear scale only on lookup. Instances are immutable
/// once built, so concurrent lookups are safe.
class GridCkm {
public:
  /// `gains_db(i, j)` is the gain at node (i, j); rows index x.
  GridCkm(Eigen::Vector2d origin, double spacing, Eigen::MatrixXd gains_db);

  const Eigen::Vector2d& origin() const { return origin_; }
  double spacing() const { return spacing_; }
  Eigen::Index nx() const { return gains_db_.rows(); }
  Eigen::Index ny() const { return gains_db_.cols(); }
  const Eigen::MatrixXd& gains_db() const { return gains_db_; }

  double gain_db(Eigen::Index i, Eigen::Index j) const { return gains_db_(i, j); }
  Eigen::Vector2d node(Eigen::Index i, Eigen::Index j) const {
    return origin_ + spacing_ * Eigen::Vector2d(double(i), double(j));
  }

  /// Bounding box of the node lattice.
  Rect extent() const;
  /// True when every point of `area` is a valid lookup query.
  bool covers(const Rect& area) const;

  /// Node index nearest to `q`. Throws out_of_map when `q` lies further
  /// than spacing/2 outside the lattice.
  std::pair<Eigen::Index, Eigen::Index> nearest_node(const Eigen::Vector2d& q) const;

  /// Gain at `q` in dB.
  double lookup_db(const Eigen::Vector2d& q, Lookup mode = Lookup::nearest) const;
  /// Linear power gain at `q`, i.e. 10^(gain_db / 10).
  double lookup_gain(const Eigen::Vector2d& q, Lookup mode = Lookup::nearest) const;

private:
  void check_query(const Eigen::Vector2d& q) const;

  Eigen::Vector2d origin_;
  double spacing_;
  Eigen::MatrixXd gains_db_;
};

inline double lookup_gain(const GridCkm& ckm, const Eigen::Vector2d& q,
                          Lookup mode = Lookup::nearest) {
  return ckm.lookup_gain(q, mode);
}

// CSV I/O. Header `x_m,y_m,gain_db`, rows ordered by y then x, LF endings.
GridCkm read_ckm(std::istream& in);
void write_ckm(std::ostream& out, const GridCkm& ckm);
GridCkm load_ckm(const std::filesystem::path& path);
void save_ckm(const std::filesystem::path& path, const GridCkm& ckm);

/// Environment used by the synthetic map generator: a flat ground with
/// box-shaped buildings and a free-space reference gain.
struct BuildingScene {
  Rect area;
  std::vector<Prism> buildings;
  double reference_gain_db = -30.0;   ///< gain at 1 m
  double blockage_penalty_db = 20.0;  ///< fixed loss per blocking building
  double penetration_loss_db_per_m = 0.0;

  void validate() const;
};

/// Result of clipping a segment against one prism.
struct SegmentHit {
  bool blocked = false;
  double length = 0.0; ///< length of the segment inside the closed prism (m)
};

/// Segment-prism test. The segment is blocked iff its relative interior
/// meets the open interior of the prism, so grazing a face, edge, or corner
/// does not count.
SegmentHit intersect(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Prism& prism);

/// Total blockage loss (dB) accumulated along a -> b.
double blockage_loss_db(const BuildingScene& scene, const Eigen::Vector3d& a,
                        const Eigen::Vector3d& b);

struct GeneratorOptions {
  /// Permit map altitudes at or below rooftop height.
  bool allow_below_rooftops = false;
};

/// Synthetic stand-in for a ray-traced map: free-space loss with exponent
/// two plus per-building blockage. The lattice starts at the area's lower
/// corner and extends until it covers the whole area.
GridCkm generate_synthetic_ckm(const BuildingScene& scene, const Eigen::Vector3d& gbs,
                               double altitude, double spacing,
                               const GeneratorOptions& options = {});

} // namespace ckmplace

#endif // CKMPLACE_CKM_HPP
