#include "compumat/layup.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "compumat/error.hpp"
#include "compumat/magnetics.hpp"

namespace compumat {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::structural: return "structural";
    case LayerKind::magnetic: return "magnetic";
    case LayerKind::circuit: return "circuit";
    case LayerKind::battery: return "battery";
    case LayerKind::aesthetic: return "aesthetic";
  }
  return "?";
}

LayerKind parse_layer_kind(std::string_view s) {
  for (auto k : {LayerKind::structural, LayerKind::magnetic, LayerKind::circuit, LayerKind::battery,
                 LayerKind::aesthetic})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown layer kind '" + std::string(s) + "'");
}

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::led: return "led";
    case ComponentKind::resistor: return "resistor";
    case ComponentKind::mcu: return "mcu";
    case ComponentKind::battery: return "battery";
  }
  return "?";
}

ComponentKind parse_component_kind(std::string_view s) {
  for (auto k : {ComponentKind::led, ComponentKind::resistor, ComponentKind::mcu, ComponentKind::battery})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown component kind '" + std::string(s) + "'");
}

bool CircuitNet::has_battery() const {
  return std::any_of(components.begin(), components.end(),
                     [](const Component& c) { return c.kind == ComponentKind::battery; });
}

double CircuitNet::min_pad_radius() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& p : pads) r = std::min(r, p.radius_mm);
  return r;
}

const Pad* CircuitNet::find_pad(std::string_view id) const {
  for (const auto& p : pads)
    if (p.id == id) return &p;
  return nullptr;
}

void validate(const CircuitNet& circuit, double side_mm) {
  std::set<std::string> ids;
  const double half = side_mm / 2.0;
  for (const auto& p : circuit.pads) {
    if (p.id.empty()) throw ValidationError("pad id must not be empty");
    if (!ids.insert(p.id).second) throw ValidationError("duplicate pad id '" + p.id + "'");
    if (!(p.radius_mm > 0.0) || !std::isfinite(p.radius_mm))
      throw ValidationError("pad '" + p.id + "' radius must be positive");
    if (!std::isfinite(p.x_mm) || !std::isfinite(p.y_mm))
      throw ValidationError("pad '" + p.id + "' center must be finite");
    if (std::abs(p.x_mm) + p.radius_mm > half || std::abs(p.y_mm) + p.radius_mm > half)
      throw ValidationError("pad '" + p.id + "' lies outside the sheet square");
    if (p.net.empty()) throw ValidationError("pad '" + p.id + "' has no net");
  }
  std::set<std::string> comp_ids;
  for (const auto& c : circuit.components) {
    if (c.id.empty()) throw ValidationError("component id must not be empty");
    if (!comp_ids.insert(c.id).second) throw ValidationError("duplicate component id '" + c.id + "'");
    if (c.nets.empty()) throw ValidationError("component '" + c.id + "' attaches to no net");
  }
  if (circuit.source_net.empty() || circuit.sink_net.empty())
    throw ValidationError("circuit needs source_net and sink_net");
  if (circuit.source_net == circuit.sink_net) throw ValidationError("source_net and sink_net must differ");
}

void validate(const CompositeSheet& sheet) {
  if (!(sheet.side_mm > 0.0)) throw ValidationError("side_mm must be positive");
  int magnetic = 0, circuit = 0, battery = 0;
  for (const auto& l : sheet.layers) {
    if (!(l.thickness_mm > 0.0)) throw ValidationError("layer '" + l.label + "' thickness must be positive");
    magnetic += l.kind == LayerKind::magnetic;
    circuit += l.kind == LayerKind::circuit;
    battery += l.kind == LayerKind::battery;
  }
  if (magnetic != 1) throw ValidationError("a sheet needs exactly one magnetic layer");
  if (circuit > 1) throw ValidationError("at most one circuit layer");
  if (battery > 1) throw ValidationError("at most one battery layer");
  const auto& g = sheet.magnetic_grid;
  if (g.n() * g.pitch_mm() > sheet.side_mm + 1e-9)
    throw ValidationError("magnetic grid extent exceeds the sheet side");
  if (sheet.circuit) validate(*sheet.circuit, sheet.side_mm);
}

double stack_thickness(std::span<const Layer> layers) {
  double t = 0.0;
  for (const auto& l : layers) t += l.thickness_mm;
  return t;
}

double stack_thickness(const CompositeSheet& sheet) { return stack_thickness(sheet.layers); }

std::vector<Layer> default_layup() {
  // Magnetic, copper and battery thicknesses are the nominal material values;
  // the structural and aesthetic layers make up the rest of the 3 mm sheet.
  return {
      {LayerKind::structural, 1.0, "support"},
      {LayerKind::magnetic, 0.76, "magnet"},
      {LayerKind::circuit, 0.3, "copper"},
      {LayerKind::battery, 0.4, "lipo"},
      {LayerKind::aesthetic, 0.54, "finish"},
  };
}

std::pair<double, double> place_point(double x_mm, double y_mm, const Pose& pose, double pitch_mm) {
  double x = pose.mated ? -x_mm : x_mm;
  double y = y_mm;
  for (int k = 0; k < pose.rot_quarter; ++k) {
    const double t = x;
    x = -y;
    y = t;
  }
  return {x + pose.dx_px * pitch_mm, y + pose.dy_px * pitch_mm};
}

std::vector<Contact> contacts_between(const CircuitNet& a, const CircuitNet& b, const Pose& pose, double pitch_mm,
                                      double tol_mm) {
  validate(pose);
  if (!(tol_mm > 0.0)) throw ValidationError("contact tolerance must be positive");
  std::vector<std::pair<double, double>> placed;
  placed.reserve(b.pads.size());
  for (const auto& q : b.pads) placed.push_back(place_point(q.x_mm, q.y_mm, pose, pitch_mm));
  std::vector<Contact> out;
  for (const auto& p : a.pads) {
    if (!p.exposed) continue;
    for (std::size_t j = 0; j < b.pads.size(); ++j) {
      if (!b.pads[j].exposed) continue;
      const double dx = placed[j].first - p.x_mm;
      const double dy = placed[j].second - p.y_mm;
      if (std::hypot(dx, dy) <= tol_mm) out.push_back({p.id, b.pads[j].id});
    }
  }
  return out;
}

std::vector<Contact> mate_contacts(const CompositeSheet& a, const CompositeSheet& b, const Pose& pose,
                                   std::optional<double> tol_mm) {
  if (!a.circuit || !b.circuit) throw ValidationError("both sheets need a circuit to mate contacts");
  if (a.magnetic_grid.pitch_mm() != b.magnetic_grid.pitch_mm())
    throw ValidationError("sheets have different pixel pitches");
  double tol = tol_mm.value_or(std::min(a.circuit->min_pad_radius(), b.circuit->min_pad_radius()));
  if (!std::isfinite(tol)) return {};  // a circuit without pads
  return contacts_between(*a.circuit, *b.circuit, pose, a.magnetic_grid.pitch_mm(), tol);
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

/// Undirected graph; asks whether a vertex lies on a simple s-t path.
class PathGraph {
 public:
  explicit PathGraph(std::size_t n) : adj_(n) {}
  void add_edge(std::size_t u, std::size_t v) {
    if (u == v) return;
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }

  bool connected(std::size_t s, std::size_t t) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<std::size_t> q{s};
    seen[s] = true;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop_front();
      if (u == t) return true;
      for (auto w : adj_[u])
        if (!seen[w]) {
          seen[w] = true;
          q.push_back(w);
        }
    }
    return false;
  }

  // v sits on a simple s-t path iff two vertex-disjoint paths lead from v to
  // {s, t}, one ending at each. Unit vertex capacities, max flow of 2.
  bool on_simple_path(std::size_t v, std::size_t s, std::size_t t) const {
    if (s == t) return false;
    if (v == s || v == t) return connected(s, t);
    const std::size_t n = adj_.size();
    const std::size_t sink = 2 * n;
    std::map<std::pair<std::size_t, std::size_t>, int> cap;
    std::vector<std::vector<std::size_t>> arcs(2 * n + 1);
    auto add = [&](std::size_t a, std::size_t b, int c) {
      if (cap.emplace(std::make_pair(a, b), c).second) arcs[a].push_back(b);
      else cap[{a, b}] += c;
      if (cap.emplace(std::make_pair(b, a), 0).second) arcs[b].push_back(a);
    };
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v) add(2 * u, 2 * u + 1, 1);
      for (auto w : adj_[u]) add(2 * u + 1, 2 * w, 1);
    }
    add(2 * s, sink, 1);
    add(2 * t, sink, 1);
    const std::size_t start = 2 * v + 1;
    int flow = 0;
    while (flow < 2) {
      std::vector<std::size_t> prev(2 * n + 1, SIZE_MAX);
      std::deque<std::size_t> q{start};
      prev[start] = start;
      while (!q.empty() && prev[sink] == SIZE_MAX) {
        const auto u = q.front();
        q.pop_front();
        for (auto w : arcs[u])
          if (prev[w] == SIZE_MAX && cap[{u, w}] > 0) {
            prev[w] = u;
            q.push_back(w);
          }
      }
      if (prev[sink] == SIZE_MAX) break;
      for (auto w = sink; w != start; w = prev[w]) {
        --cap[{prev[w], w}];
        ++cap[{w, prev[w]}];
      }
      ++flow;
    }
    return flow == 2;
  }

 private:
  std::vector<std::vector<std::size_t>> adj_;
};

}  // namespace

ContinuityResult circuit_continuity(std::span<const LabeledCircuit> circuits, std::span<const PadContact> contacts) {
  // Every net name mentioned anywhere becomes a node, qualified by its circuit.
  std::map<std::string, std::size_t> index;
  std::vector<std::string> names;
  auto net_id = [&](std::size_t ci, const std::string& net) {
    const std::string q = circuits[ci].label + ":" + net;
    auto [it, fresh] = index.emplace(q, names.size());
    if (fresh) names.push_back(q);
    return it->second;
  };
  for (std::size_t ci = 0; ci < circuits.size(); ++ci) {
    const auto& c = *circuits[ci].circuit;
    for (const auto& p : c.pads) net_id(ci, p.net);
    for (const auto& comp : c.components)
      for (const auto& n : comp.nets) net_id(ci, n);
    net_id(ci, c.source_net);
    net_id(ci, c.sink_net);
    for (const auto& n : c.required_nets) net_id(ci, n);
  }

  UnionFind uf(names.size());
  for (const auto& k : contacts) {
    if (k.circuit_a >= circuits.size() || k.circuit_b >= circuits.size())
      throw ValidationError("contact refers to an unknown circuit");
    const Pad* pa = circuits[k.circuit_a].circuit->find_pad(k.pad_a);
    const Pad* pb = circuits[k.circuit_b].circuit->find_pad(k.pad_b);
    if (!pa || !pb) throw ValidationError("contact refers to an unknown pad");
    uf.unite(net_id(k.circuit_a, pa->net), net_id(k.circuit_b, pb->net));
  }

  ContinuityResult res;

  std::map<std::size_t, std::vector<std::string>> classes;
  for (std::size_t i = 0; i < names.size(); ++i) classes[uf.find(i)].push_back(names[i]);
  for (auto& [root, members] : classes) {
    std::sort(members.begin(), members.end());
    res.partition.push_back(members);
  }
  std::sort(res.partition.begin(), res.partition.end());

  for (std::size_t ci = 0; ci < circuits.size(); ++ci) {
    const auto& c = *circuits[ci].circuit;
    std::vector<std::string> nets;
    for (const auto& [q, id] : index)
      if (q.rfind(circuits[ci].label + ":", 0) == 0) nets.push_back(q.substr(circuits[ci].label.size() + 1));
    // Allowed merges chain: nets joined through allowed pairs form one group.
    std::map<std::string, std::size_t> local;
    for (std::size_t i = 0; i < nets.size(); ++i) local[nets[i]] = i;
    UnionFind groups(nets.size());
    for (const auto& [m1, m2] : c.allowed_merges) {
      const auto x = local.find(m1), y = local.find(m2);
      if (x != local.end() && y != local.end()) groups.unite(x->second, y->second);
    }
    auto allowed = [&](std::size_t i, std::size_t j) { return groups.find(i) == groups.find(j); };
    for (std::size_t i = 0; i < nets.size(); ++i)
      for (std::size_t j = i + 1; j < nets.size(); ++j)
        if (uf.find(net_id(ci, nets[i])) == uf.find(net_id(ci, nets[j])) && !allowed(i, j)) {
          res.shorted = true;
          res.shorted_nets.emplace_back(circuits[ci].label + ":" + nets[i], circuits[ci].label + ":" + nets[j]);
        }
  }

  // Component graph: net classes plus one node per non-battery component.
  std::map<std::size_t, std::size_t> class_node;
  for (std::size_t i = 0; i < names.size(); ++i) class_node.emplace(uf.find(i), class_node.size());
  std::vector<std::pair<std::string, std::size_t>> comp_nodes;
  std::size_t next = class_node.size();
  for (std::size_t ci = 0; ci < circuits.size(); ++ci)
    for (const auto& comp : circuits[ci].circuit->components)
      if (comp.kind != ComponentKind::battery) comp_nodes.emplace_back(circuits[ci].label + ":" + comp.id, next++);
  PathGraph graph(next);
  {
    std::size_t k = 0;
    for (std::size_t ci = 0; ci < circuits.size(); ++ci)
      for (const auto& comp : circuits[ci].circuit->components) {
        if (comp.kind == ComponentKind::battery) continue;
        for (const auto& n : comp.nets) graph.add_edge(comp_nodes[k].second, class_node[uf.find(net_id(ci, n))]);
        ++k;
      }
  }

  for (std::size_t ci = 0; ci < circuits.size(); ++ci) {
    const auto& c = *circuits[ci].circuit;
    if (!c.has_battery()) continue;
    const std::size_t s = class_node[uf.find(net_id(ci, c.source_net))];
    const std::size_t t = class_node[uf.find(net_id(ci, c.sink_net))];
    for (std::size_t i = 0; i < names.size(); ++i)
      if (graph.on_simple_path(class_node[uf.find(i)], s, t)) res.closed_nets.insert(names[i]);
    for (const auto& [id, node] : comp_nodes)
      if (graph.on_simple_path(node, s, t)) res.powered_components.insert(id);
  }
  return res;
}

ContinuityResult circuit_continuity(const CompositeSheet& a, const CompositeSheet& b,
                                    std::span<const Contact> contacts) {
  if (!a.circuit || !b.circuit) throw ValidationError("both sheets need a circuit");
  const LabeledCircuit cs[] = {{"A", &*a.circuit}, {"B", &*b.circuit}};
  std::vector<PadContact> pc;
  pc.reserve(contacts.size());
  for (const auto& k : contacts) pc.push_back({0, k.pad_a, 1, k.pad_b});
  return circuit_continuity(cs, pc);
}

MatingCheckResult double_authenticate(const CompositeSheet& a, const CompositeSheet& b, const Pose& pose,
                                      double gap_mm, double f_min_n, std::optional<double> tol_mm) {
  if (!(f_min_n > 0.0)) throw ValidationError("f_min_n must be positive");
  validate(a);
  validate(b);
  MatingCheckResult r;
  r.bond_force_n = pairwise_interaction(a.magnetic_grid, b.magnetic_grid, pose, gap_mm).normal_force_n;
  r.bonded = r.bond_force_n >= f_min_n;
  r.contacts = mate_contacts(a, b, pose, tol_mm);
  const auto cont = circuit_continuity(a, b, r.contacts);
  r.closed_nets = cont.closed_nets;
  r.shorted = cont.shorted;
  r.shorted_nets = cont.shorted_nets;
  for (const auto& [label, sheet] : {std::pair{"A", &a}, std::pair{"B", &b}})
    for (const auto& n : sheet->circuit->required_nets) {
      const std::string q = std::string(label) + ":" + n;
      if (!r.closed_nets.count(q)) r.open_required_nets.push_back(q);
    }
  r.authenticated = r.bonded && r.open_required_nets.empty() && !r.shorted;
  return r;
}

}  // namespace compumat
