#include "oracles.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#ifndef TBL_CIRCUITS_DIR
#define TBL_CIRCUITS_DIR "circuits"
#endif

namespace tbl::oracle {

double poiseuille(double length, double diameter, double viscosity) {
  const double r = diameter / 2.0;
  // 8 mu L / (pi r^4)
  return 8.0 * viscosity * length / (std::numbers::pi * r * r * r * r);
}

double not_gate_high_kpa(double supply_kpa, double r_supply, double r_valve, double r_pulldown) {
  return supply_kpa * r_pulldown / (r_supply + r_valve + r_pulldown);
}

double fanout_rint_for(double target_kpa, double supply_kpa, double r_tube, double r_valve) {
  const double branch = 3.0 * r_tube + r_valve;
  const double parallel = branch / 2.0;
  const double supply_node = target_kpa * branch / (2.0 * r_tube);
  return parallel * (supply_kpa / supply_node - 1.0);
}

std::vector<double> dense_nodal(const Network& net, std::span<const ValveState> states) {
  const std::size_t n = net.nodes().size();
  std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
  auto stamp = [&](NodeIndex a, NodeIndex b, double c) {
    g[a][a] += c;
    g[b][b] += c;
    g[a][b] -= c;
    g[b][a] -= c;
  };
  for (const auto& t : net.tubes()) {
    if (!(t.resistance > 0.0)) throw std::invalid_argument("dense_nodal needs positive resistances");
    stamp(t.from, t.to, 1.0 / t.resistance);
  }
  for (std::size_t i = 0; i < net.valves().size(); ++i) {
    const auto& v = net.valves()[i];
    const double c = states[i] == ValveState::Open ? v.open_conductance : v.leak_conductance;
    if (c > 0.0) stamp(v.flow_from, v.flow_to, c);
  }

  // Reachability from fixed nodes through conducting elements.
  std::vector<bool> reach(n, false);
  std::vector<NodeIndex> stack;
  for (NodeIndex i = 0; i < n; ++i) {
    if (net.nodes()[i].kind == NodeKind::Fixed) {
      reach[i] = true;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const NodeIndex a = stack.back();
    stack.pop_back();
    for (NodeIndex b = 0; b < n; ++b) {
      if (b != a && g[a][b] != 0.0 && !reach[b]) {
        reach[b] = true;
        stack.push_back(b);
      }
    }
  }

  std::vector<double> p(n, 0.0);
  std::vector<NodeIndex> unknown;
  std::vector<long> slot(n, -1);
  for (NodeIndex i = 0; i < n; ++i) {
    if (net.nodes()[i].kind == NodeKind::Fixed) {
      p[i] = net.nodes()[i].fixed.pa();
    } else if (reach[i]) {
      slot[i] = static_cast<long>(unknown.size());
      unknown.push_back(i);
    }
  }
  const std::size_t m = unknown.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t r = 0; r < m; ++r) {
    const NodeIndex i = unknown[r];
    for (NodeIndex j = 0; j < n; ++j) {
      if (g[i][j] == 0.0) continue;
      if (slot[j] >= 0) {
        a[r][static_cast<std::size_t>(slot[j])] += g[i][j];
      } else if (net.nodes()[j].kind == NodeKind::Fixed) {
        a[r][m] -= g[i][j] * p[j];
      }
    }
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k <= m; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::vector<double> x(m, 0.0);
  for (std::size_t r = m; r-- > 0;) {
    double s = a[r][m];
    for (std::size_t k = r + 1; k < m; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  for (std::size_t r = 0; r < m; ++r) p[unknown[r]] = x[r];
  return p;
}

double rc_charge(double p_source, double r, double c, double t) {
  return p_source * (1.0 - std::exp(-t / (r * c)));
}

double trapezoid(std::span<const double> t, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CircuitAst load_circuit(const std::string& name) {
  return parse(read_file(std::string(TBL_CIRCUITS_DIR) + "/" + name));
}

}  // namespace tbl::oracle
