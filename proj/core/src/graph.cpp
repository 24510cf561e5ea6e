#include "prefmine/graph.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "prefmine/error.hpp"
#include "text.hpp"

namespace prefmine {

namespace {

void validate_costs(std::span<const double> costs, std::size_t expected_dim,
                    const std::string& where) {
  if (costs.size() != expected_dim) {
    throw ValidationError(where + ": expected " + std::to_string(expected_dim) +
                          " costs, got " + std::to_string(costs.size()));
  }
  for (const double c : costs) {
    if (!std::isfinite(c) || c < 0.0) {
      throw ValidationError(where + ": cost " + text::format_double(c) +
                            " is not a finite nonnegative number");
    }
  }
}

}  // namespace

std::optional<std::size_t> RoadNetwork::cost_index(std::string_view name) const {
  for (std::size_t i = 0; i < cost_names_.size(); ++i) {
    if (cost_names_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<NodeId> RoadNetwork::find_node(std::int64_t label) const {
  const auto it = node_lookup_.find(label);
  if (it == node_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> RoadNetwork::find_edge(std::int64_t label) const {
  const auto it = edge_lookup_.find(label);
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

RoadNetwork RoadNetwork::with_costs(std::vector<double> costs, std::vector<double> scales) const {
  if (costs.size() != costs_.size()) {
    throw DimensionMismatch("replacement cost table has wrong size");
  }
  if (scales.size() != cost_dim()) {
    throw DimensionMismatch("replacement cost scales have wrong size");
  }
  for (std::size_t e = 0; e < num_edges(); ++e) {
    validate_costs({costs.data() + e * cost_dim(), cost_dim()}, cost_dim(),
                   "edge " + std::to_string(edge_labels_[e]));
  }
  RoadNetwork out = *this;
  out.costs_ = std::move(costs);
  out.cost_scales_ = std::move(scales);
  return out;
}

void RoadNetwork::finalize() {
  const std::size_t n = num_nodes();
  out_offsets_.assign(n + 1, 0);
  for (const NodeId s : sources_) ++out_offsets_[index(s) + 1];
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  out_edges_.assign(num_edges(), EdgeId{0});
  std::vector<std::size_t> cursor(out_offsets_.begin(), out_offsets_.end() - 1);
  // Edges are visited in id order, so each adjacency list is sorted by EdgeId.
  for (std::uint32_t e = 0; e < num_edges(); ++e) {
    out_edges_[cursor[index(sources_[e])]++] = EdgeId{e};
  }
}

NetworkBuilder::NetworkBuilder(std::vector<std::string> cost_names) {
  if (cost_names.empty()) throw ValidationError("cost dimension must be at least 1");
  net_.cost_scales_.assign(cost_names.size(), 1.0);
  net_.cost_names_ = std::move(cost_names);
}

NodeId NetworkBuilder::add_node(std::int64_t label) {
  const NodeId id{static_cast<std::uint32_t>(net_.node_labels_.size())};
  if (!net_.node_lookup_.emplace(label, id).second) {
    throw ValidationError("duplicate node id " + std::to_string(label));
  }
  net_.node_labels_.push_back(label);
  return id;
}

EdgeId NetworkBuilder::add_edge(std::int64_t label, std::int64_t source_label,
                                std::int64_t target_label, std::span<const double> costs) {
  const std::string where = "edge " + std::to_string(label);
  const auto src = net_.find_node(source_label);
  const auto dst = net_.find_node(target_label);
  if (!src) throw ValidationError(where + " references unknown node " + std::to_string(source_label));
  if (!dst) throw ValidationError(where + " references unknown node " + std::to_string(target_label));
  validate_costs(costs, net_.cost_dim(), where);

  const EdgeId id{static_cast<std::uint32_t>(net_.edge_labels_.size())};
  if (!net_.edge_lookup_.emplace(label, id).second) {
    throw ValidationError("duplicate edge id " + std::to_string(label));
  }
  net_.edge_labels_.push_back(label);
  net_.sources_.push_back(*src);
  net_.targets_.push_back(*dst);
  net_.costs_.insert(net_.costs_.end(), costs.begin(), costs.end());
  return id;
}

void NetworkBuilder::set_cost_scales(std::vector<double> scales) {
  if (scales.size() != net_.cost_dim()) throw ValidationError("cost scale count differs from d");
  for (const double s : scales) {
    if (!std::isfinite(s) || s <= 0.0) throw ValidationError("cost scales must be positive");
  }
  net_.cost_scales_ = std::move(scales);
}

RoadNetwork NetworkBuilder::build() && {
  net_.finalize();
  return std::move(net_);
}

RoadNetwork load_network(std::istream& in, NetworkFormat /*format*/) {
  std::optional<NetworkBuilder> builder;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> costs;

  auto need_header = [&](std::size_t at) {
    if (!builder) throw ParseError("record before the `d` header", at);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_blank_or_comment(line)) continue;
    const auto tok = text::split_ws(line);
    const std::string_view kind = tok[0];

    if (kind == "d") {
      if (builder) throw ParseError("duplicate `d` header", line_no);
      if (tok.size() < 2) throw ParseError("`d` needs a dimension", line_no);
      const auto d = text::parse_int(tok[1]);
      if (!d || *d < 1) throw ParseError("invalid cost dimension", line_no);
      dim = static_cast<std::size_t>(*d);
      if (tok.size() != dim + 2) {
        throw ParseError("`d " + std::to_string(dim) + "` needs exactly " + std::to_string(dim) +
                             " cost names",
                         line_no);
      }
      std::vector<std::string> names;
      for (std::size_t i = 0; i < dim; ++i) names.emplace_back(tok[i + 2]);
      builder.emplace(std::move(names));
    } else if (kind == "s") {
      need_header(line_no);
      if (tok.size() != dim + 1) throw ParseError("`s` needs one scale per dimension", line_no);
      std::vector<double> scales;
      for (std::size_t i = 0; i < dim; ++i) {
        const auto v = text::parse_double(tok[i + 1]);
        if (!v) throw ParseError("malformed scale", line_no);
        scales.push_back(*v);
      }
      builder->set_cost_scales(std::move(scales));
    } else if (kind == "n") {
      need_header(line_no);
      if (tok.size() != 2) throw ParseError("`n` takes exactly one node id", line_no);
      const auto id = text::parse_int(tok[1]);
      if (!id) throw ParseError("malformed node id", line_no);
      builder->add_node(*id);
    } else if (kind == "e") {
      need_header(line_no);
      if (tok.size() != dim + 4) {
        throw ParseError("`e` needs id, source, target and " + std::to_string(dim) + " costs",
                         line_no);
      }
      const auto id = text::parse_int(tok[1]);
      const auto src = text::parse_int(tok[2]);
      const auto dst = text::parse_int(tok[3]);
      if (!id || !src || !dst) throw ParseError("malformed edge ids", line_no);
      costs.clear();
      for (std::size_t i = 0; i < dim; ++i) {
        const auto v = text::parse_double(tok[i + 4]);
        if (!v) throw ParseError("malformed cost `" + std::string(tok[i + 4]) + "`", line_no);
        costs.push_back(*v);
      }
      builder->add_edge(*id, *src, *dst, costs);
    } else {
      throw ParseError("unknown record `" + std::string(kind) + "`", line_no);
    }
  }
  if (!builder) throw ParseError("missing `d` header");
  return std::move(*builder).build();
}

RoadNetwork load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open network file " + path);
  return load_network(in);
}

void save_network(std::ostream& out, const RoadNetwork& network) {
  out << "d " << network.cost_dim();
  for (const auto& name : network.cost_names()) out << ' ' << name;
  out << '\n';
  bool unit_scales = true;
  for (const double s : network.cost_scales()) unit_scales = unit_scales && s == 1.0;
  if (!unit_scales) {
    out << 's';
    for (const double s : network.cost_scales()) out << ' ' << text::format_double(s);
    out << '\n';
  }
  for (std::uint32_t n = 0; n < network.num_nodes(); ++n) {
    out << "n " << network.node_label(NodeId{n}) << '\n';
  }
  for (std::uint32_t e = 0; e < network.num_edges(); ++e) {
    const EdgeId id{e};
    out << "e " << network.edge_label(id) << ' ' << network.node_label(network.source(id)) << ' '
        << network.node_label(network.target(id));
    for (const double c : network.costs(id)) out << ' ' << text::format_double(c);
    out << '\n';
  }
}

void save_network_file(const std::string& path, const RoadNetwork& network) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write network file " + path);
  save_network(out, network);
}

RoadNetwork normalize_costs(const RoadNetwork& network) {
  const std::size_t d = network.cost_dim();
  const std::size_t m = network.num_edges();
  if (m == 0) throw DegenerateCost("cannot normalize a network without edges");

  const auto table = network.cost_table();
  std::vector<double> mean(d, 0.0);
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t i = 0; i < d; ++i) mean[i] += table[e * d + i];
  }
  for (std::size_t i = 0; i < d; ++i) {
    mean[i] /= static_cast<double>(m);
    if (!(mean[i] > 0.0)) {
      throw DegenerateCost("cost dimension `" + network.cost_names()[i] + "` is identically zero");
    }
  }
  std::vector<double> costs(table.begin(), table.end());
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t i = 0; i < d; ++i) costs[e * d + i] /= mean[i];
  }
  std::vector<double> scales = network.cost_scales();
  for (std::size_t i = 0; i < d; ++i) scales[i] *= mean[i];
  return network.with_costs(std::move(costs), std::move(scales));
}

}  // namespace prefmine
