#include "ckmplace/ckm.hpp"
#include "ckmplace/error.hpp"

#include "number_format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace ckmplace {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::parse: return "parse";
  case ErrorCode::non_uniform_grid: return "non_uniform_grid";
  case ErrorCode::missing_node: return "missing_node";
  case ErrorCode::non_finite_gain: return "non_finite_gain";
  case ErrorCode::invalid_argument: return "invalid_argument";
  case ErrorCode::out_of_map: return "out_of_map";
  case ErrorCode::zero_distance: return "zero_distance";
  case ErrorCode::infeasible: return "infeasible";
  case ErrorCode::degenerate: return "degenerate";
  case ErrorCode::budget_exceeded: return "budget_exceeded";
  case ErrorCode::config: return "config";
  case ErrorCode::io: return "io";
  }
  return "unknown";
}

namespace {

// Relative tolerance for lattice regularity checks.
constexpr double kGridTol = 1e-6;
// Margin used to keep grazing contacts out of the open prism interior.
constexpr double kInteriorMargin = 1e-9;

} // namespace

GridCkm::GridCkm(Eigen::Vector2d origin, double spacing, Eigen::MatrixXd gains_db)
    : origin_(std::move(origin)), spacing_(spacing), gains_db_(std::move(gains_db)) {
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
    throw Error(ErrorCode::invalid_argument, "CKM spacing must be positive");
  }
  if (!origin_.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "CKM origin must be finite");
  }
  if (gains_db_.rows() < 2 || gains_db_.cols() < 2) {
    throw Error(ErrorCode::invalid_argument, "CKM needs at least 2x2 nodes");
  }
  if (!gains_db_.allFinite()) {
    throw Error(ErrorCode::non_finite_gain, "CKM contains a non-finite gain");
  }
  if (gains_db_.maxCoeff() > 0.0) {
    throw Error(ErrorCode::invalid_argument,
                "CKM gain above 0 dB: " + std::to_string(gains_db_.maxCoeff()));
  }
}

Rect GridCkm::extent() const {
  const Eigen::Vector2d far = node(nx() - 1, ny() - 1);
  return {origin_.x(), far.x(), origin_.y(), far.y()};
}

bool GridCkm::covers(const Rect& area) const {
  const Rect e = extent();
  const double half = 0.5 * spacing_;
  return area.x_min >= e.x_min - half && area.x_max <= e.x_max + half &&
         area.y_min >= e.y_min - half && area.y_max <= e.y_max + half;
}

void GridCkm::check_query(const Eigen::Vector2d& q) const {
  const Rect e = extent();
  const double reach = 0.5 * spacing_ * (1.0 + 1e-12);
  if (!q.allFinite() || !e.contains(q, reach)) {
    std::ostringstream msg;
    msg << "query (" << q.x() << ", " << q.y() << ") lies outside the map";
    throw Error(ErrorCode::out_of_map, msg.str());
  }
}

std::pair<Eigen::Index, Eigen::Index> GridCkm::nearest_node(const Eigen::Vector2d& q) const {
  check_query(q);
  // ceil(t - 1/2) rounds to nearest and sends exact midpoints down.
  auto snap = [this](double t, Eigen::Index count) {
    const auto idx = static_cast<Eigen::Index>(std::ceil(t - 0.5));
    return std::clamp<Eigen::Index>(idx, 0, count - 1);
  };
  const Eigen::Vector2d t = (q - origin_) / spacing_;
  return {snap(t.x(), nx()), snap(t.y(), ny())};
}

double GridCkm::lookup_db(const Eigen::Vector2d& q, Lookup mode) const {
  if (mode == Lookup::nearest) {
    const auto [i, j] = nearest_node(q);
    return gains_db_(i, j);
  }
  check_query(q);
  const Eigen::Vector2d t = (q - origin_) / spacing_;
  auto cell = [](double v, Eigen::Index count) {
    const double clamped = std::clamp(v, 0.0, double(count - 1));
    const auto lo = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(clamped)), count - 2);
    return std::pair{lo, clamped - double(lo)};
  };
  const auto [i, u] = cell(t.x(), nx());
  const auto [j, v] = cell(t.y(), ny());
  return (1 - u) * (1 - v) * gains_db_(i, j) + u * (1 - v) * gains_db_(i + 1, j) +
         (1 - u) * v * gains_db_(i, j + 1) + u * v * gains_db_(i + 1, j + 1);
}

double GridCkm::lookup_gain(const Eigen::Vector2d& q, Lookup mode) const {
  return std::pow(10.0, lookup_db(q, mode) / 10.0);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

constexpr const char* kCkmHeader = "x_m,y_m,gain_db";

struct CsvNode {
  double x;
  double y;
  double gain;
  std::size_t line;
};

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<double> distinct_sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double v : values) {
    if (out.empty() || !nearly_equal(out.back(), v)) {
      out.push_back(v);
    }
  }
  return out;
}

// Returns the uniform step of `axis`, or throws non_uniform_grid.
double uniform_step(const std::vector<double>& axis, const char* name) {
  if (axis.size() < 2) {
    throw Error(ErrorCode::missing_node,
                std::string("CKM needs at least two distinct ") + name + " coordinates");
  }
  const double step = (axis.back() - axis.front()) / double(axis.size() - 1);
  for (std::size_t i = 1; i < axis.size(); ++i) {
    const double d = axis[i] - axis[i - 1];
    if (std::abs(d - step) > kGridTol * step) {
      std::ostringstream msg;
      msg << "non-uniform grid along " << name << ": step " << d << " between " << axis[i - 1]
          << " and " << axis[i] << " (expected " << step << ")";
      throw Error(ErrorCode::non_uniform_grid, msg.str());
    }
  }
  return step;
}

} // namespace

GridCkm read_ckm(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::parse, "CKM file is empty");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != kCkmHeader) {
    throw Error(ErrorCode::parse, "line 1: expected header '" + std::string(kCkmHeader) + "'");
  }

  std::vector<CsvNode> nodes;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    double fields[3];
    std::string_view rest(line);
    for (int f = 0; f < 3; ++f) {
      const auto comma = rest.find(',');
      const bool last = f == 2;
      if ((comma == std::string_view::npos) != last) {
        throw Error(ErrorCode::parse,
                    "line " + std::to_string(line_no) + ": expected 3 comma-separated fields");
      }
      const auto token = last ? rest : rest.substr(0, comma);
      const auto value = detail::parse_double(token);
      if (!value) {
        throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": malformed number '" +
                                          std::string(token) + "'");
      }
      fields[f] = *value;
      if (!last) {
        rest.remove_prefix(comma + 1);
      }
    }
    if (!std::isfinite(fields[0]) || !std::isfinite(fields[1])) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": non-finite coordinate");
    }
    if (!std::isfinite(fields[2])) {
      throw Error(ErrorCode::non_finite_gain,
                  "line " + std::to_string(line_no) + ": non-finite gain");
    }
    nodes.push_back({fields[0], fields[1], fields[2], line_no});
  }

  std::vector<double> xs, ys;
  xs.reserve(nodes.size());
  ys.reserve(nodes.size());
  for (const auto& n : nodes) {
    xs.push_back(n.x);
    ys.push_back(n.y);
  }
  const auto x_axis = distinct_sorted(std::move(xs));
  const auto y_axis = distinct_sorted(std::move(ys));
  const double dx = uniform_step(x_axis, "x");
  const double dy = uniform_step(y_axis, "y");
  if (std::abs(dx - dy) > kGridTol * std::max(dx, dy)) {
    throw Error(ErrorCode::non_uniform_grid, "x spacing and y spacing differ");
  }
  const double spacing = dx;
  const auto nx = static_cast<Eigen::Index>(x_axis.size());
  const auto ny = static_cast<Eigen::Index>(y_axis.size());

  Eigen::MatrixXd gains = Eigen::MatrixXd::Constant(nx, ny, std::nan(""));
  for (const auto& n : nodes) {
    const auto i = static_cast<Eigen::Index>(std::llround((n.x - x_axis.front()) / spacing));
    const auto j = static_cast<Eigen::Index>(std::llround((n.y - y_axis.front()) / spacing));
    if (!std::isnan(gains(i, j))) {
      throw Error(ErrorCode::parse, "line " + std::to_string(n.line) + ": duplicate node");
    }
    gains(i, j) = n.gain;
  }
  if (static_cast<Eigen::Index>(nodes.size()) != nx * ny) {
    for (Eigen::Index j = 0; j < ny; ++j) {
      for (Eigen::Index i = 0; i < nx; ++i) {
        if (std::isnan(gains(i, j))) {
          std::ostringstream msg;
          msg << "missing node at (" << x_axis.front() + double(i) * spacing << ", "
              << y_axis.front() + double(j) * spacing << ")";
          throw Error(ErrorCode::missing_node, msg.str());
        }
      }
    }
  }
  return GridCkm({x_axis.front(), y_axis.front()}, spacing, std::move(gains));
}

void write_ckm(std::ostream& out, const GridCkm& ckm) {
  out << kCkmHeader << '\n';
  for (Eigen::Index j = 0; j < ckm.ny(); ++j) {
    for (Eigen::Index i = 0; i < ckm.nx(); ++i) {
      const Eigen::Vector2d p = ckm.node(i, j);
      out << detail::fixed(p.x()) << ',' << detail::fixed(p.y()) << ','
          << detail::shortest(ckm.gain_db(i, j)) << '\n';
    }
  }
}

GridCkm load_ckm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open CKM file " + path.string());
  }
  try {
    return read_ckm(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_ckm(const std::filesystem::path& path, const GridCkm& ckm) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::io, "cannot write CKM file " + path.string());
  }
  write_ckm(out, ckm);
  if (!out) {
    throw Error(ErrorCode::io, "write failed for " + path.string());
  }
}

// ---------------------------------------------------------------------------
// Synthetic generation

void BuildingScene::validate() const {
  if (!area.valid() || area.width() <= 0.0 || area.height() <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "scene area must have positive extent");
  }
  if (!std::isfinite(reference_gain_db)) {
    throw Error(ErrorCode::invalid_argument, "reference gain must be finite");
  }
  if (!(blockage_penalty_db >= 0.0) || !(penetration_loss_db_per_m >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "blockage penalties must be non-negative");
  }
  for (std::size_t b = 0; b < buildings.size(); ++b) {
    const Prism& p = buildings[b];
    if (!(p.height > 0.0)) {
      throw Error(ErrorCode::invalid_argument,
                  "building " + std::to_string(b) + " must have positive height");
    }
    if (!p.footprint.valid() || !area.contains(p.footprint)) {
      throw Error(ErrorCode::invalid_argument,
                  "building " + std::to_string(b) + " footprint must lie inside the area");
    }
  }
}

SegmentHit intersect(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Prism& prism) {
  const Eigen::Vector3d lo(prism.footprint.x_min, prism.footprint.y_min, 0.0);
  const Eigen::Vector3d hi(prism.footprint.x_max, prism.footprint.y_max, prism.height);
  const Eigen::Vector3d d = b - a;

  double t0 = 0.0;
  double t1 = 1.0;
  for (int c = 0; c < 3; ++c) {
    if (d(c) == 0.0) {
      if (a(c) < lo(c) || a(c) > hi(c)) {
        return {};
      }
      continue;
    }
    double ta = (lo(c) - a(c)) / d(c);
    double tb = (hi(c) - a(c)) / d(c);
    if (ta > tb) {
      std::swap(ta, tb);
    }
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t1 < t0) {
      return {};
    }
  }
  if (!(t1 > t0)) {
    return {};
  }
  // A chord of a convex body meets the open interior iff its midpoint does.
  const Eigen::Vector3d mid = a + 0.5 * (t0 + t1) * d;
  const bool interior = ((mid.array() > lo.array() + kInteriorMargin) &&
                         (mid.array() < hi.array() - kInteriorMargin)).all();
  if (!interior) {
    return {};
  }
  return {true, (t1 - t0) * d.norm()};
}

double blockage_loss_db(const BuildingScene& scene, const Eigen::Vector3d& a,
                        const Eigen::Vector3d& b) {
  double loss = 0.0;
  for (const Prism& p : scene.buildings) {
    const SegmentHit hit = intersect(a, b, p);
    if (hit.blocked) {
      loss += scene.blockage_penalty_db + scene.penetration_loss_db_per_m * hit.length;
    }
  }
  return loss;
}

GridCkm generate_synthetic_ckm(const BuildingScene& scene, const Eigen::Vector3d& gbs,
                               double altitude, double spacing, const GeneratorOptions& options) {
  scene.validate();
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(ErrorCode::invalid_argument, "spacing must be positive");
  }
  if (!gbs.allFinite() || !std::isfinite(altitude)) {
    throw Error(ErrorCode::invalid_argument, "GBS location and altitude must be finite");
  }
  if (!options.allow_below_rooftops) {
    for (const Prism& p : scene.buildings) {
      if (altitude <= p.height) {
        throw Error(ErrorCode::invalid_argument,
                    "map altitude must exceed every building height");
      }
    }
  }

  auto count = [spacing](double extent) {
    const auto steps = static_cast<Eigen::Index>(std::ceil(extent / spacing - 1e-9));
    return std::max<Eigen::Index>(steps, 1) + 1;
  };
  const Eigen::Index nx = count(scene.area.width());
  const Eigen::Index ny = count(scene.area.height());
  const Eigen::Vector2d origin(scene.area.x_min, scene.area.y_min);

  Eigen::MatrixXd gains(nx, ny);
  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      const Eigen::Vector3d p(origin.x() + double(i) * spacing,
                              origin.y() + double(j) * spacing, altitude);
      const double d2 = (p - gbs).squaredNorm();
      if (d2 == 0.0) {
        throw Error(ErrorCode::zero_distance, "GBS coincides with a map node");
      }
      gains(i, j) = scene.reference_gain_db - 10.0 * std::log10(d2) -
                    blockage_loss_db(scene, gbs, p);
    }
  }
  return GridCkm(origin, spacing, std::move(gains));
}

} // namespace ckmplace
