// Apache License, Version 2.0, refer to LICENSE
#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bellaudit/cell_ref.hpp"
#include "bellaudit/errors.hpp"
#include "bellaudit/tolerance.hpp"

namespace bellaudit {

/// One dimension of a probability table: a name and a finite alphabet.
struct Axis {
  std::string name;
  std::vector<std::string> labels;

  friend bool operator==(const Axis&, const Axis&) = default;
};

/// Dense finite probability table over named outcome axes.  Weights are
/// stored row-major in the declared axis order; immutable after
/// construction.  This is the universal numeric carrier: priors,
/// kernels, phenomenology blocks and parametric families all live here.
class ProbTable {
 public:
  /// Throws TableError on negative weights, duplicate axis names, empty
  /// alphabets, size mismatch, or (when `normalized`) a total weight
  /// farther than tol.tau_norm from one.
  ProbTable(std::vector<Axis> axes, Eigen::ArrayXd values,
            bool normalized = true, const Tolerance& tol = {});

  static ProbTable uniform(std::vector<Axis> axes);
  /// All weight on one joint cell, identified by one label per axis.
  static ProbTable point_mass(std::vector<Axis> axes,
                              const std::vector<std::string>& at);

  const std::vector<Axis>& axes() const { return axes_; }
  const Eigen::ArrayXd& values() const { return values_; }
  bool normalized() const { return normalized_; }

  Eigen::Index rank() const { return static_cast<Eigen::Index>(axes_.size()); }
  Eigen::Index size() const { return values_.size(); }
  double sum() const { return values_.sum(); }

  /// Position of the named axis; AxisError if absent.
  Eigen::Index axis_index(std::string_view name) const;
  bool has_axis(std::string_view name) const;
  /// Position of a label within axis `axis`; AxisError if absent.
  Eigen::Index label_index(Eigen::Index axis, std::string_view label) const;

  Eigen::Index flat_index(std::span<const Eigen::Index> multi) const;
  std::vector<Eigen::Index> multi_index(Eigen::Index flat) const;

  double operator[](Eigen::Index flat) const { return values_[flat]; }
  double at(std::span<const Eigen::Index> multi) const {
    return values_[flat_index(multi)];
  }
  double at(std::initializer_list<Eigen::Index> multi) const {
    return at(std::span<const Eigen::Index>(multi.begin(), multi.size()));
  }

  /// Symbols of the joint cell `flat`, one per axis, in axis order.
  std::vector<std::string> labels_at(Eigen::Index flat) const;
  /// Same, as a named index for report witnesses.
  CellRef cell_ref(Eigen::Index flat) const;

  friend bool operator==(const ProbTable& lhs, const ProbTable& rhs) {
    return lhs.axes_ == rhs.axes_ && lhs.normalized_ == rhs.normalized_ &&
           lhs.values_.size() == rhs.values_.size() &&
           (lhs.values_ == rhs.values_).all();
  }

 private:
  std::vector<Axis> axes_;
  std::vector<Eigen::Index> strides_;  // row-major
  Eigen::ArrayXd values_;
  bool normalized_ = true;
};

/// Sum out every axis not in `keep` (a set; result keeps the table's
/// declared axis order).  Unknown names raise AxisError.
ProbTable marginalize(const ProbTable& t, const std::vector<std::string>& keep,
                      const Tolerance& tol = {});

/// Condition on `on = value` and drop that axis.  The marginal
/// probability of the conditioning event must exceed tol.tau_norm;
/// otherwise ZeroConditionError (0/0 is never silently defined).
ProbTable condition(const ProbTable& t, std::string_view on,
                    std::string_view value, const Tolerance& tol = {});

/// Sup-norm comparison of two tables with identical axes.
struct CloseResult {
  bool close = false;
  double max_deviation = 0.0;
  Eigen::Index witness = 0;  // first flat index achieving the sup
};

CloseResult table_close(const ProbTable& t1, const ProbTable& t2,
                        const Tolerance& tol = {});

}  // namespace bellaudit
