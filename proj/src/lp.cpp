#include "clusterdesc/lp.hpp"

#include <cmath>
#include <sstream>

#include "simplex.hpp"

namespace clusterdesc {

std::string LpModel::variable_name(int v) const {
  const VarDesc& desc = vars[static_cast<std::size_t>(v)];
  switch (desc.kind) {
    case VarKind::TagAssign:
      return "x_" + std::to_string(desc.cluster) + "_" + std::to_string(desc.index);
    case VarKind::ObjectCovered:
      return "z_" + std::to_string(desc.index);
    case VarKind::OverlapFlag:
      return "y_" + std::to_string(desc.index);
  }
  return "v_" + std::to_string(v);
}

namespace {

void add_unit_vars(LpModel& model, const Instance& instance, bool with_overlap) {
  const int k = instance.cluster_count();
  const int m = instance.tag_count();
  const int n = instance.object_count();
  model.clusters = k;
  model.tags = m;
  model.objects = n;
  model.has_overlap_vars = with_overlap;
  for (int l = 0; l < k; ++l) {
    for (TagId j = 0; j < m; ++j) model.vars.push_back({VarKind::TagAssign, l, j});
  }
  for (int i = 0; i < n; ++i) model.vars.push_back({VarKind::ObjectCovered, -1, i});
  if (with_overlap) {
    for (TagId j = 0; j < m; ++j) model.vars.push_back({VarKind::OverlapFlag, -1, j});
  }
  model.lower.assign(model.vars.size(), 0.0);
  model.upper.assign(model.vars.size(), 1.0);
}

// Per-object coverage rows, cluster-major: sum_{j in t_i} x_l(j) - z(i) >= 0.
void add_coverage_rows(LpModel& model, const Instance& instance) {
  for (int l = 0; l < instance.cluster_count(); ++l) {
    for (int i = 0; i < instance.object_count(); ++i) {
      const ObjectRecord& obj = instance.object(i);
      if (obj.cluster != l) continue;
      LpRow row;
      row.sense = RowSense::Ge;
      row.rhs = 0.0;
      for (TagId j : obj.tags) row.coeffs.push_back({model.x_index(l, j), 1.0});
      row.coeffs.push_back({model.z_index(i), -1.0});
      model.rows.push_back(std::move(row));
    }
  }
}

// Per-cluster targets: sum_{i in C_l} z(i) >= M_l. Empty clusters produce an
// empty row and are dropped (their target is forced to 0 by validation).
void add_target_rows(LpModel& model, const Instance& instance, const Requirements& requirements) {
  for (int l = 0; l < instance.cluster_count(); ++l) {
    LpRow row;
    row.sense = RowSense::Ge;
    row.rhs = static_cast<double>(requirements.coverage[static_cast<std::size_t>(l)]);
    for (int i = 0; i < instance.object_count(); ++i) {
      if (instance.object(i).cluster == l) row.coeffs.push_back({model.z_index(i), 1.0});
    }
    if (row.coeffs.empty() && row.rhs <= 0.0) continue;
    model.rows.push_back(std::move(row));
  }
}

}  // namespace

LpModel build_relaxation(const Instance& instance, const Requirements& requirements) {
  validate_requirements(instance, requirements);
  LpModel model;
  model.sense = ObjectiveSense::Minimize;
  add_unit_vars(model, instance, /*with_overlap=*/false);
  for (int l = 0; l < instance.cluster_count(); ++l) {
    for (TagId j = 0; j < instance.tag_count(); ++j) {
      model.objective.push_back({model.x_index(l, j), 1.0});
    }
  }
  add_coverage_rows(model, instance);
  add_target_rows(model, instance, requirements);
  // Disjointness: sum_l x_l(j) <= 1 per tag.
  for (TagId j = 0; j < instance.tag_count(); ++j) {
    LpRow row;
    row.sense = RowSense::Le;
    row.rhs = 1.0;
    for (int l = 0; l < instance.cluster_count(); ++l) {
      row.coeffs.push_back({model.x_index(l, j), 1.0});
    }
    model.rows.push_back(std::move(row));
  }
  return model;
}

LpModel build_overlap_lp(const Instance& instance, const Requirements& requirements) {
  if (instance.cluster_count() != 2) {
    throw UnsupportedError("overlap LP is defined for k = 2, got k = " +
                           std::to_string(instance.cluster_count()));
  }
  if (!requirements.budget || !requirements.overlap_budget) {
    throw ValidationError("overlap LP needs both budget and overlap_budget");
  }
  validate_requirements(instance, requirements);
  LpModel model;
  model.sense = ObjectiveSense::Maximize;
  add_unit_vars(model, instance, /*with_overlap=*/true);
  for (int i = 0; i < instance.object_count(); ++i) {
    model.objective.push_back({model.z_index(i), 1.0});
  }
  add_coverage_rows(model, instance);
  // Cost budget: sum_j x_1(j) + x_2(j) <= B.
  {
    LpRow row;
    row.sense = RowSense::Le;
    row.rhs = static_cast<double>(*requirements.budget);
    for (int l = 0; l < 2; ++l) {
      for (TagId j = 0; j < instance.tag_count(); ++j) {
        row.coeffs.push_back({model.x_index(l, j), 1.0});
      }
    }
    if (!row.coeffs.empty()) model.rows.push_back(std::move(row));
  }
  add_target_rows(model, instance, requirements);
  // Relaxed disjointness: x_1(j) + x_2(j) <= 1 + y(j).
  for (TagId j = 0; j < instance.tag_count(); ++j) {
    LpRow row;
    row.sense = RowSense::Le;
    row.rhs = 1.0;
    row.coeffs.push_back({model.x_index(0, j), 1.0});
    row.coeffs.push_back({model.x_index(1, j), 1.0});
    row.coeffs.push_back({model.y_index(j), -1.0});
    model.rows.push_back(std::move(row));
  }
  // Overlap budget: sum_j y(j) <= B_o.
  {
    LpRow row;
    row.sense = RowSense::Le;
    row.rhs = static_cast<double>(*requirements.overlap_budget);
    for (TagId j = 0; j < instance.tag_count(); ++j) {
      row.coeffs.push_back({model.y_index(j), 1.0});
    }
    if (!row.coeffs.empty()) model.rows.push_back(std::move(row));
  }
  return model;
}

LpSolution solve_lp(const LpModel& model) {
  return detail::solve_with_options(model, detail::SimplexOptions{});
}

namespace {

void append_terms(std::ostringstream& out, const std::vector<std::pair<int, double>>& terms,
                  const LpModel& model) {
  bool first = true;
  for (const auto& [v, c] : terms) {
    if (c == 0.0) continue;
    if (first) {
      if (c < 0.0) out << "- ";
      first = false;
    } else {
      out << (c < 0.0 ? " - " : " + ");
    }
    const double mag = std::abs(c);
    if (mag != 1.0) out << mag << " ";
    out << model.variable_name(v);
  }
  if (first) out << "0";
}

}  // namespace

std::string write_lp_text(const LpModel& model) {
  std::ostringstream out;
  out << (model.sense == ObjectiveSense::Maximize ? "Maximize" : "Minimize") << "\n obj: ";
  append_terms(out, model.objective, model);
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    const LpRow& row = model.rows[r];
    out << " c" << r << ": ";
    append_terms(out, row.coeffs, model);
    switch (row.sense) {
      case RowSense::Ge:
        out << " >= ";
        break;
      case RowSense::Le:
        out << " <= ";
        break;
      case RowSense::Eq:
        out << " = ";
        break;
    }
    out << row.rhs << "\n";
  }
  out << "Bounds\n";
  for (int v = 0; v < model.variable_count(); ++v) {
    out << " " << model.lower[static_cast<std::size_t>(v)] << " <= " << model.variable_name(v)
        << " <= " << model.upper[static_cast<std::size_t>(v)] << "\n";
  }
  out << "End\n";
  return out.str();
}

}  // namespace clusterdesc
