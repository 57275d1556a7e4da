#pragma once

// Location table over the gate set, regime-by-regime thresholds and the published reference
// values they are compared with.

#include "gcq/cu_redundancy.hpp"
#include "gcq/gadgets.hpp"
#include "gcq/locations.hpp"
#include "gcq/threshold.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gcq::report {

/// Decimal with 12 significant digits, the format of every numeric output.
inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Which gadget realises a table row in a regime (nullopt for N/A).
struct RowSpec {
  std::string name;
  std::function<std::optional<Gadget>(Regime)> gadget;
  bool in_gate_set = true;  ///< candidate for the worst-case gadget
};

inline std::vector<RowSpec> row_specs() {
  using gadgets::build_ec;
  auto always = [](std::function<Gadget()> f) { return [f](Regime) -> std::optional<Gadget> { return f(); }; };
  auto split = [](std::function<std::optional<Gadget>()> unrestricted, std::function<Gadget()> rest) {
    return [=](Regime r) -> std::optional<Gadget> { return r == Regime::Unrestricted ? unrestricted() : rest(); };
  };
  auto none = []() -> std::optional<Gadget> { return std::nullopt; };
  return {
      {"1q", always([] { return gadgets::build_bitwise_1q(GateKind::H); }), true},
      {"cnot", always([] { return gadgets::build_bitwise_cnot(); }), true},
      {"t", split([] { return std::optional<Gadget>(gadgets::build_t_measured()); }, [] { return gadgets::build_t(); }), true},
      {"toffoli", split(none, [] { return gadgets::build_toffoli_v2().gadget; }), true},
      {"n", split(none, [] { return gadgets::build_n(true); }), true},
      {"ec", split([] { return std::optional<Gadget>(gadgets::build_ec_measured()); }, [] { return build_ec(); }), false},
      {"toffoli_v1", split(none, [] { return gadgets::build_toffoli_v1(true).gadget; }), false},
  };
}

struct Row {
  std::string name;
  bool in_gate_set = true;
  int ec_inputs = 0, ec_outputs = 0;
  std::map<Regime, std::optional<LocationTally>> cells;
};

inline Row count_row(const RowSpec& spec, const CountOptions& o = {}) {
  Row row;
  row.name = spec.name;
  row.in_gate_set = spec.in_gate_set;
  for (Regime r : all_regimes()) {
    auto g = spec.gadget(r);
    if (!g) {
      row.cells[r] = std::nullopt;
      continue;
    }
    row.ec_inputs = g->ec_inputs;
    row.ec_outputs = g->ec_outputs;
    auto t = count_locations(*g, r, o);
    t.gadget_name = spec.name;
    row.cells[r] = t;
  }
  return row;
}

inline std::vector<Row> location_table(const CountOptions& o = {}) {
  std::vector<Row> rows;
  for (auto& s : row_specs()) rows.push_back(count_row(s, o));
  return rows;
}

inline const Row& find_row(const std::vector<Row>& rows, const std::string& name) {
  for (auto& r : rows)
    if (r.name == name) return r;
  throw std::out_of_range("no table row " + name);
}

/// Published location counts (nullopt for N/A), in regime order.
struct ReferenceRow {
  std::string name;
  std::array<std::optional<std::uint64_t>, 5> cells;
};

inline const std::vector<ReferenceRow>& reference_table() {
  static const std::vector<ReferenceRow> t = {
      {"1q", {{7, 7, 49, 49, 196}}},
      {"cnot", {{7, 7, 91, 637, 2695}}},
      {"t", {{237, 2023, 4926, 10498, 34018}}},
      {"toffoli", {{std::nullopt, 6279, 41952, 123663, 447357}}},
      {"n", {{std::nullopt, 1127, 3078, 5990, 15692}}},
      {"ec", {{142, 1486, 2928, 4982, 19724}}},
  };
  return t;
}

/// Published thresholds in regime order; the last one includes the two-level relation.
inline const std::array<double, 5>& reference_thresholds() {
  static const std::array<double, 5> t{8.9e-6, 6.4e-9, 8.1e-10, 2.6e-10, 6.8e-11};
  return t;
}

struct Anchors {
  static constexpr std::uint64_t toffoli_physical = 447357;
  static constexpr std::uint64_t ec_physical = 19724;
  static constexpr std::uint64_t A = 565701;
  static constexpr double eps_simple = 6.2e-12;
  static constexpr std::uint64_t classical_locations = 1800;
  static constexpr double eps_c = 6e-7;
};

struct RegimeThreshold {
  Regime regime = Regime::Unrestricted;
  std::string worst_gadget;
  double A = 0, B = 0;
  double eps_simple = 0;
  double eps_benign = 0;
  double eps = 0;  ///< the regime's threshold: benign fixed point, two-level in the physical model
};

inline LocationTally worst_in(const std::vector<Row>& rows, Regime r) {
  std::vector<GadgetEntry> entries;
  for (auto& row : rows)
    if (row.in_gate_set && row.cells.at(r)) entries.push_back({*row.cells.at(r), row.ec_inputs, row.ec_outputs});
  return worst_gadget_A(entries, *find_row(rows, "ec").cells.at(r));
}

inline std::vector<RegimeThreshold> regime_thresholds(const std::vector<Row>& rows) {
  std::vector<RegimeThreshold> out;
  for (Regime r : all_regimes()) {
    auto w = worst_in(rows, r);
    RegimeThreshold t;
    t.regime = r;
    t.worst_gadget = w.gadget_name;
    t.A = double(w.A);
    t.B = w.B;
    t.eps_simple = threshold_simple(t.A);
    t.eps_benign = threshold_benign(t.A, t.B);
    t.eps = t.eps_benign;
    if (r == Regime::PhysicalModel) {
      auto nn = worst_in(rows, Regime::NearestNeighbour);
      t.eps = threshold_two_level(t.A, t.B, double(nn.A), nn.B);
    }
    out.push_back(t);
  }
  return out;
}

inline std::string table_header() {
  std::string h = "gadget";
  for (Regime r : all_regimes()) h += "," + regime_name(r);
  return h;
}

inline std::string table_line(const Row& row) {
  std::string s = row.name;
  for (Regime r : all_regimes()) s += "," + (row.cells.at(r) ? std::to_string(row.cells.at(r)->total) : std::string("N/A"));
  return s;
}

/// Table of location totals, one CSV line per gadget.
inline std::string table_csv(const std::vector<Row>& rows) {
  std::string s = table_header() + "\n";
  for (auto& r : rows) s += table_line(r) + "\n";
  return s;
}

/// Reconstructed against published counts: gadget,regime,reconstructed,reference,ratio.
inline std::string comparison_csv(const std::vector<Row>& rows) {
  std::string s = "gadget,regime,reconstructed,reference,ratio\n";
  for (auto& ref : reference_table()) {
    const Row& row = find_row(rows, ref.name);
    for (std::size_t i = 0; i < all_regimes().size(); ++i) {
      Regime r = all_regimes()[i];
      auto& cell = row.cells.at(r);
      s += ref.name + "," + regime_name(r) + ",";
      s += cell ? std::to_string(cell->total) : std::string("N/A");
      s += ",";
      s += ref.cells[i] ? std::to_string(*ref.cells[i]) : std::string("N/A");
      s += ",";
      s += cell && ref.cells[i] ? fmt(double(cell->total) / double(*ref.cells[i])) : std::string("N/A");
      s += "\n";
    }
  }
  return s;
}

inline nlohmann::json thresholds_json(const std::vector<RegimeThreshold>& ts) {
  nlohmann::json a = nlohmann::json::array();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    auto& t = ts[i];
    a.push_back({{"regime", regime_name(t.regime)},
                 {"worst_gadget", t.worst_gadget},
                 {"A", t.A},
                 {"B", t.B},
                 {"eps_simple", fmt(t.eps_simple)},
                 {"eps_benign", fmt(t.eps_benign)},
                 {"eps", fmt(t.eps)},
                 {"reference", fmt(reference_thresholds()[i])}});
  }
  return a;
}

/// Everything deterministic: location table, comparison, thresholds, anchors, classical count.
inline nlohmann::json summary(const CountOptions& o = {}) {
  auto rows = location_table(o);
  auto ts = regime_thresholds(rows);
  auto cl = cu::classical_location_count({}, o);
  const double A = double(Anchors::toffoli_physical + 6 * Anchors::ec_physical);
  bool monotone = true;
  for (std::size_t i = 1; i < ts.size(); ++i) monotone = monotone && ts[i].eps < ts[i - 1].eps;
  nlohmann::json cls = nlohmann::json::array();
  for (auto& p : cl.parts) cls.push_back({{"part", p.name}, {"steps", p.steps}, {"locations", p.locations}});
  return {
      {"options", {{"resource_layers", o.resource_layers}, {"movement_steps", o.movement_steps}}},
      {"table_csv", table_csv(rows)},
      {"comparison_csv", comparison_csv(rows)},
      {"thresholds", thresholds_json(ts)},
      {"thresholds_strictly_decreasing", monotone},
      {"anchors",
       {{"A_from_reference_counts", A},
        {"eps_simple_of_A", fmt(threshold_simple(A))},
        {"eps_simple_reference", fmt(Anchors::eps_simple)},
        {"eps_simple_of_1800", fmt(threshold_simple(double(Anchors::classical_locations)))},
        {"eps_c_reference", fmt(Anchors::eps_c)}}},
      {"classical",
       {{"parts", cls},
        {"total", cl.total},
        {"pairs", cl.pairs},
        {"eps_c", fmt(threshold_simple(double(cl.total)))}}},
  };
}

}  // namespace gcq::report
