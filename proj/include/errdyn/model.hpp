#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errdyn/types.hpp"

namespace errdyn {

class GroupModel;
using ModelPtr = std::shared_ptr<const GroupModel>;

// Optional closed-form capabilities a model may provide. The generic series
// and Pade routes stay available regardless; these only enable fast paths.
struct ClosedFormFlags {
  bool exp = false;
  bool log = false;
  bool dexp = false;
  bool c_correction = false;
};

// Closed-form hooks, filled in by model factories that have them. All take
// the owning model as first argument so one function can serve a family.
struct ClosedFormHooks {
  std::function<Mat(const GroupModel&, const Vec&)> exp;
  std::function<Vec(const GroupModel&, const Mat&)> log;
  // returns dexp_m(-v), i.e. the right-Jacobian side used by the error maps
  std::function<Mat(const GroupModel&, const Vec&)> dexp_neg;
  // alternating-sign drift correction C(x, gamma); callers flip arguments
  // for the positive-sign convention
  std::function<Vec(const GroupModel&, const Vec&, const Vec&)> c_lid;
};

/// Describes a matrix Lie group through an ordered basis of its algebra.
/// Immutable after construction; share via ModelPtr across threads.
class GroupModel {
public:
  GroupModel(std::string name, int n, int d, std::vector<Mat> basis);

  std::string name;
  int n = 0;  // ambient matrix dimension
  int d = 0;  // algebra dimension
  std::vector<Mat> basis;
  int series_truncation = 14;
  ClosedFormFlags closed_form;
  ClosedFormHooks hooks;
  // >= 0 marks the SE_N(3) family (0 = SO(3)); generic models keep -1
  int sen3_N = -1;

  // cached: row i of vee_projector maps vec(m) to coordinate i
  const Mat& vee_projector() const { return vee_proj_; }
  // cached: adm(v) = sum_i v_i * adm_slice(i)
  const Mat& adm_slice(int i) const { return adm_slices_[i]; }

  // Largest off-span residual of [E_i, E_j] over all basis pairs, and the
  // Gram-matrix condition check. Throws std::invalid_argument on failure.
  void validate(double closure_tol = 1e-12) const;

  // Residual of the group membership test, or nullopt if the model has none.
  std::optional<double> membership_residual(const Mat& X) const;

private:
  Mat vee_proj_;               // d x n^2
  std::vector<Mat> adm_slices_;  // d matrices of size d x d
  friend ModelPtr finish_model(GroupModel&&);
};

// Generic model from an explicit basis; validates closure on construction.
ModelPtr make_generic_model(std::string name, int n, std::vector<Mat> basis);

/// A group element tied to its model. Construction checks the dimension;
/// membership is checked where the model defines a test.
struct GroupElement {
  ModelPtr model;
  Mat mat;
  GroupElement(ModelPtr m, Mat X);
};

/// Coordinates of an algebra element in the model basis.
struct AlgebraVector {
  ModelPtr model;
  Vec coords;
  AlgebraVector(ModelPtr m, Vec v);
};

/// d x d matrix representation of ad_x.
struct AdmMatrix {
  ModelPtr model;
  Mat mat;
};

}  // namespace errdyn
