// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/prob_table.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace bellaudit {

ProbTable::ProbTable(std::vector<Axis> axes, Eigen::ArrayXd values,
                     bool normalized, const Tolerance& tol)
    : axes_(std::move(axes)), values_(std::move(values)),
      normalized_(normalized) {
  std::unordered_set<std::string_view> seen;
  Eigen::Index expected = 1;
  for (const Axis& axis : axes_) {
    if (axis.labels.empty()) {
      throw TableError("axis '" + axis.name + "' has an empty alphabet");
    }
    if (!seen.insert(axis.name).second) {
      throw TableError("duplicate axis name '" + axis.name + "'");
    }
    expected *= static_cast<Eigen::Index>(axis.labels.size());
  }
  if (values_.size() != expected) {
    throw TableError("value count " + std::to_string(values_.size()) +
                     " does not match joint alphabet size " +
                     std::to_string(expected));
  }
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw TableError("weight at flat index " + std::to_string(i) +
                       " is negative or not finite");
    }
  }
  if (normalized_ && std::abs(values_.sum() - 1.0) > tol.tau_norm) {
    throw TableError("weights sum to " + std::to_string(values_.sum()) +
                     ", expected 1 within tau_norm");
  }
  strides_.assign(axes_.size(), 1);
  for (Eigen::Index i = rank() - 2; i >= 0; --i) {
    strides_[i] = strides_[i + 1] *
                  static_cast<Eigen::Index>(axes_[i + 1].labels.size());
  }
}

ProbTable ProbTable::uniform(std::vector<Axis> axes) {
  Eigen::Index n = 1;
  for (const Axis& axis : axes) {
    n *= static_cast<Eigen::Index>(axis.labels.size());
  }
  return ProbTable(std::move(axes),
                   Eigen::ArrayXd::Constant(n, 1.0 / static_cast<double>(n)));
}

ProbTable ProbTable::point_mass(std::vector<Axis> axes,
                                const std::vector<std::string>& at) {
  if (at.size() != axes.size()) {
    throw TableError("point mass needs one label per axis");
  }
  Eigen::Index n = 1;
  for (const Axis& axis : axes) {
    n *= static_cast<Eigen::Index>(axis.labels.size());
  }
  ProbTable zero(std::move(axes), Eigen::ArrayXd::Zero(n), false);
  std::vector<Eigen::Index> multi(zero.axes_.size());
  for (Eigen::Index i = 0; i < zero.rank(); ++i) {
    multi[i] = zero.label_index(i, at[i]);
  }
  Eigen::ArrayXd values = Eigen::ArrayXd::Zero(n);
  values[zero.flat_index(multi)] = 1.0;
  return ProbTable(zero.axes_, std::move(values));
}

Eigen::Index ProbTable::axis_index(std::string_view name) const {
  for (Eigen::Index i = 0; i < rank(); ++i) {
    if (axes_[i].name == name) return i;
  }
  throw AxisError("unknown axis '" + std::string(name) + "'");
}

bool ProbTable::has_axis(std::string_view name) const {
  return std::any_of(axes_.begin(), axes_.end(),
                     [&](const Axis& a) { return a.name == name; });
}

Eigen::Index ProbTable::label_index(Eigen::Index axis,
                                    std::string_view label) const {
  const auto& labels = axes_[axis].labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<Eigen::Index>(i);
  }
  throw AxisError("axis '" + axes_[axis].name + "' has no label '" +
                  std::string(label) + "'");
}

Eigen::Index ProbTable::flat_index(std::span<const Eigen::Index> multi) const {
  Eigen::Index flat = 0;
  for (Eigen::Index i = 0; i < rank(); ++i) {
    flat += multi[i] * strides_[i];
  }
  return flat;
}

std::vector<Eigen::Index> ProbTable::multi_index(Eigen::Index flat) const {
  std::vector<Eigen::Index> multi(axes_.size());
  for (Eigen::Index i = 0; i < rank(); ++i) {
    multi[i] = flat / strides_[i];
    flat %= strides_[i];
  }
  return multi;
}

std::vector<std::string> ProbTable::labels_at(Eigen::Index flat) const {
  auto multi = multi_index(flat);
  std::vector<std::string> labels(multi.size());
  for (std::size_t i = 0; i < multi.size(); ++i) {
    labels[i] = axes_[i].labels[multi[i]];
  }
  return labels;
}

CellRef ProbTable::cell_ref(Eigen::Index flat) const {
  CellRef ref;
  auto labels = labels_at(flat);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ref.add(axes_[i].name, labels[i]);
  }
  return ref;
}

ProbTable marginalize(const ProbTable& t, const std::vector<std::string>& keep,
                      const Tolerance& tol) {
  std::vector<bool> kept(t.rank(), false);
  for (const std::string& name : keep) {
    kept[t.axis_index(name)] = true;
  }
  std::vector<Axis> axes;
  std::vector<Eigen::Index> kept_pos;
  for (Eigen::Index i = 0; i < t.rank(); ++i) {
    if (kept[i]) {
      axes.push_back(t.axes()[i]);
      kept_pos.push_back(i);
    }
  }
  Eigen::Index n = 1;
  for (const Axis& axis : axes) {
    n *= static_cast<Eigen::Index>(axis.labels.size());
  }
  Eigen::ArrayXd values = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index flat = 0; flat < t.size(); ++flat) {
    auto multi = t.multi_index(flat);
    Eigen::Index out = 0;
    for (std::size_t k = 0; k < kept_pos.size(); ++k) {
      out = out * static_cast<Eigen::Index>(axes[k].labels.size()) +
            multi[kept_pos[k]];
    }
    values[out] += t[flat];
  }
  return ProbTable(std::move(axes), std::move(values), t.normalized(), tol);
}

ProbTable condition(const ProbTable& t, std::string_view on,
                    std::string_view value, const Tolerance& tol) {
  const Eigen::Index axis = t.axis_index(on);
  const Eigen::Index label = t.label_index(axis, value);

  std::vector<Axis> axes;
  for (Eigen::Index i = 0; i < t.rank(); ++i) {
    if (i != axis) axes.push_back(t.axes()[i]);
  }
  Eigen::Index n = t.size() / static_cast<Eigen::Index>(
                                  t.axes()[axis].labels.size());
  Eigen::ArrayXd values(n);
  double mass = 0.0;
  Eigen::Index out = 0;
  for (Eigen::Index flat = 0; flat < t.size(); ++flat) {
    if (t.multi_index(flat)[axis] != label) continue;
    values[out++] = t[flat];
    mass += t[flat];
  }
  if (mass <= tol.tau_norm) {
    throw ZeroConditionError("conditioning on " + std::string(on) + "=" +
                             std::string(value) +
                             ", an event of probability " +
                             std::to_string(mass));
  }
  values /= mass;
  return ProbTable(std::move(axes), std::move(values), true, tol);
}

CloseResult table_close(const ProbTable& t1, const ProbTable& t2,
                        const Tolerance& tol) {
  if (t1.axes() != t2.axes()) {
    throw AxisError("table_close requires identical axes");
  }
  CloseResult result;
  result.max_deviation = -1.0;
  for (Eigen::Index i = 0; i < t1.size(); ++i) {
    const double dev = std::abs(t1[i] - t2[i]);
    if (dev > result.max_deviation) {
      result.max_deviation = dev;
      result.witness = i;
    }
  }
  if (result.max_deviation < 0.0) result.max_deviation = 0.0;  // rank-0 table
  result.close = result.max_deviation <= tol.tau_eq;
  return result;
}

}  // namespace bellaudit
