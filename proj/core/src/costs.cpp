#include "prefmine/costs.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <string>
#include <unordered_map>

#include "prefmine/error.hpp"
#include "text.hpp"

namespace prefmine::costs {

RoadClass classify_road(bool is_motorway, bool source_in_city, bool target_in_city) {
  if (is_motorway) return RoadClass::Motorway;
  if (source_in_city || target_in_city) return RoadClass::City;
  return RoadClass::Other;
}

double default_speed_limit_kmh(RoadClass road_class) {
  switch (road_class) {
    case RoadClass::Motorway:
      return 130.0;
    case RoadClass::City:
      return 50.0;
    case RoadClass::Other:
      break;
  }
  return 80.0;
}

double clamped_estimate_s(const EdgeAttributes& attrs) {
  if (attrs.length_km <= 0.0) return attrs.travel_time_estimate_s;
  const double slowest_s = attrs.length_km / kMinEstimatedSpeedKmh * 3600.0;
  return std::min(attrs.travel_time_estimate_s, slowest_s);
}

double derive_travel_time(const EdgeAttributes& attrs, double confidence_k) {
  const double estimate = clamped_estimate_s(attrs);
  const auto& hist = attrs.historical_travel_times_s;
  if (hist.empty()) return estimate;
  double sum = 0.0;
  for (const double t : hist) sum += t;
  const double n = static_cast<double>(hist.size());
  const double mean = sum / n;
  return (confidence_k * estimate + n * mean) / (confidence_k + n);
}

double effective_speed_limit_kmh(const EdgeAttributes& attrs) {
  if (attrs.speed_limit_kmh && *attrs.speed_limit_kmh > 0.0) return *attrs.speed_limit_kmh;
  return default_speed_limit_kmh(attrs.road_class);
}

double derive_congestion(const EdgeAttributes& attrs, double travel_time_s) {
  if (!(attrs.length_km > 0.0)) {
    throw ZeroLength("edge " + std::to_string(attrs.edge_id) + " has zero length");
  }
  const double free_flow_s = attrs.length_km / effective_speed_limit_kmh(attrs) * 3600.0;
  const double c = 1.0 - free_flow_s / travel_time_s;
  return std::clamp(c, 0.0, 1.0);
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) return;
  min_ = max_ = points_.front();
  for (const Point& p : points_) {
    min_.x = std::min(min_.x, p.x);
    min_.y = std::min(min_.y, p.y);
    max_.x = std::max(max_.x, p.x);
    max_.y = std::max(max_.y, p.y);
  }
}

CrowdednessGrid::CrowdednessGrid(const PointSet& points, std::size_t grid_w, std::size_t grid_h)
    : w_(grid_w), h_(grid_h), min_(points.min()), max_(points.max()) {
  if (grid_w == 0 || grid_h == 0) throw ValidationError("grid dimensions must be positive");
  counts_.assign(w_ * h_, 0);
  for (const Point& p : points.points()) ++counts_[cell_of(p)];
}

std::size_t CrowdednessGrid::cell_of(Point p) const {
  auto axis = [](double v, double lo, double hi, std::size_t cells) -> std::size_t {
    const double span = hi - lo;
    if (!(span > 0.0)) return 0;
    const double f = (v - lo) / span * static_cast<double>(cells);
    if (!(f > 0.0)) return 0;
    return std::min(static_cast<std::size_t>(f), cells - 1);
  };
  return axis(p.y, min_.y, max_.y, h_) * w_ + axis(p.x, min_.x, max_.x, w_);
}

std::uint32_t CrowdednessGrid::cell_count(Point p) const { return counts_[cell_of(p)]; }

double CrowdednessGrid::edge_crowdedness(std::span<const Point> geometry) const {
  if (geometry.empty()) throw EmptyGeometry("edge has no geometry points");
  double sum = 0.0;
  for (const Point& p : geometry) sum += cell_count(p);
  return sum;
}

double derive_crowdedness(const PointSet& points, std::size_t grid_w, std::size_t grid_h,
                          std::span<const Point> edge_geometry) {
  if (edge_geometry.empty()) throw EmptyGeometry("edge has no geometry points");
  return CrowdednessGrid(points, grid_w, grid_h).edge_crowdedness(edge_geometry);
}

namespace {

RoadClass parse_class(std::string_view s, std::size_t line_no) {
  if (s == "motorway" || s == "Motorway") return RoadClass::Motorway;
  if (s == "city" || s == "City") return RoadClass::City;
  if (s == "other" || s == "Other") return RoadClass::Other;
  throw ParseError("unknown road class `" + std::string(s) + "`", line_no);
}

double need_double(std::string_view s, std::size_t line_no, const char* what) {
  const auto v = text::parse_double(text::trim(s));
  if (!v || !std::isfinite(*v)) throw ParseError(std::string("malformed ") + what, line_no);
  return *v;
}

}  // namespace

std::vector<EdgeAttributes> load_edge_attributes(std::istream& in) {
  std::vector<EdgeAttributes> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_blank_or_comment(line)) continue;
    const auto f = text::split(text::trim(line), ',');
    if (text::trim(f[0]) == "edge_id") continue;
    if (f.size() != 6) throw ParseError("attribute row needs 6 fields", line_no);

    EdgeAttributes a;
    const auto id = text::parse_int(text::trim(f[0]));
    if (!id) throw ParseError("malformed edge id", line_no);
    a.edge_id = *id;
    a.length_km = need_double(f[1], line_no, "length");
    if (a.length_km < 0.0) throw ValidationError("negative edge length at line " + std::to_string(line_no));
    if (text::trim(f[2]) != "-") {
      a.speed_limit_kmh = need_double(f[2], line_no, "speed limit");
      if (*a.speed_limit_kmh <= 0.0) throw ValidationError("speed limit must be positive");
    }
    a.road_class = parse_class(text::trim(f[3]), line_no);
    a.travel_time_estimate_s = need_double(f[4], line_no, "travel time estimate");
    if (!(a.travel_time_estimate_s > 0.0)) throw ValidationError("travel time estimate must be positive");
    const auto hist = text::trim(f[5]);
    if (!hist.empty()) {
      for (const auto tok : text::split(hist, ';')) {
        if (text::trim(tok).empty()) continue;
        const double t = need_double(tok, line_no, "historical time");
        if (!(t > 0.0)) throw ValidationError("historical travel times must be positive");
        a.historical_travel_times_s.push_back(t);
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Point> load_points(std::istream& in) {
  std::vector<Point> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_blank_or_comment(line)) continue;
    const auto tok = text::split_ws(line);
    if (tok.size() != 2) throw ParseError("point line needs `x y`", line_no);
    out.push_back({need_double(tok[0], line_no, "x"), need_double(tok[1], line_no, "y")});
  }
  return out;
}

void load_edge_geometry(std::istream& in, std::vector<EdgeAttributes>& attrs) {
  std::unordered_map<std::int64_t, std::size_t> by_id;
  for (std::size_t i = 0; i < attrs.size(); ++i) by_id.emplace(attrs[i].edge_id, i);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_blank_or_comment(line)) continue;
    const auto tok = text::split_ws(line);
    if (tok.size() != 3) throw ParseError("geometry line needs `edge_id x y`", line_no);
    const auto id = text::parse_int(tok[0]);
    if (!id) throw ParseError("malformed edge id", line_no);
    const auto it = by_id.find(*id);
    if (it == by_id.end()) throw ParseError("geometry for unknown edge " + std::to_string(*id), line_no);
    attrs[it->second].geometry_points.push_back(
        {need_double(tok[1], line_no, "x"), need_double(tok[2], line_no, "y")});
  }
}

RoadNetwork derive_cost_network(const RoadNetwork& topology, std::span<const EdgeAttributes> attrs,
                                const PointSet& points, const DerivationOptions& options) {
  std::unordered_map<std::int64_t, const EdgeAttributes*> by_id;
  for (const auto& a : attrs) by_id.emplace(a.edge_id, &a);
  const CrowdednessGrid grid(points, options.grid_w, options.grid_h);

  NetworkBuilder builder({"travel_time", "congestion", "crowdedness", "intersections"});
  for (std::uint32_t n = 0; n < topology.num_nodes(); ++n) builder.add_node(topology.node_label(NodeId{n}));
  for (std::uint32_t e = 0; e < topology.num_edges(); ++e) {
    const EdgeId id{e};
    const auto label = topology.edge_label(id);
    const auto it = by_id.find(label);
    if (it == by_id.end()) throw ValidationError("no attributes for edge " + std::to_string(label));
    const EdgeAttributes& a = *it->second;
    const double tt = derive_travel_time(a, options.confidence_k);
    const double congestion = a.length_km > 0.0 ? derive_congestion(a, tt) : 0.0;
    const double crowd = grid.edge_crowdedness(a.geometry_points);
    const double c[] = {tt, congestion, crowd, unit_cost()};
    builder.add_edge(label, topology.node_label(topology.source(id)),
                     topology.node_label(topology.target(id)), c);
  }
  RoadNetwork net = std::move(builder).build();
  return options.normalize ? normalize_costs(net) : net;
}

}  // namespace prefmine::costs
