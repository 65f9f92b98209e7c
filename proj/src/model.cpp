#include "errdyn/model.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace errdyn {

namespace {

Vec vectorize(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

}  // namespace

GroupModel::GroupModel(std::string name_, int n_, int d_, std::vector<Mat> basis_)
    : name(std::move(name_)), n(n_), d(d_), basis(std::move(basis_)) {
  if (static_cast<int>(basis.size()) != d)
    throw std::invalid_argument("GroupModel: basis size != d");
  for (const Mat& e : basis)
    if (e.rows() != n || e.cols() != n)
      throw std::invalid_argument("GroupModel: basis matrix is not n x n");

  Mat B(n * n, d);
  for (int i = 0; i < d; ++i) B.col(i) = vectorize(basis[i]);
  // pseudo-inverse of the vectorized basis; rows recover coordinates
  vee_proj_ = B.completeOrthogonalDecomposition().pseudoInverse();

  adm_slices_.resize(d);
  for (int i = 0; i < d; ++i) {
    adm_slices_[i].resize(d, d);
    for (int j = 0; j < d; ++j) {
      Mat br = basis[i] * basis[j] - basis[j] * basis[i];
      adm_slices_[i].col(j) = vee_proj_ * vectorize(br);
    }
  }
}

void GroupModel::validate(double closure_tol) const {
  Mat B(n * n, d);
  for (int i = 0; i < d; ++i) B.col(i) = vectorize(basis[i]);
  Eigen::ColPivHouseholderQR<Mat> qr(B);
  if (qr.rank() < d)
    throw std::invalid_argument("GroupModel '" + name +
                                "': basis is linearly dependent");
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Mat br = basis[i] * basis[j] - basis[j] * basis[i];
      Vec c = vee_proj_ * vectorize(br);
      Mat rec = Mat::Zero(n, n);
      for (int k = 0; k < d; ++k) rec += c[k] * basis[k];
      double scale = std::max(1.0, br.norm());
      if ((br - rec).norm() > closure_tol * scale)
        throw std::invalid_argument("GroupModel '" + name +
                                    "': bracket leaves span(basis)");
    }
  }
}

std::optional<double> GroupModel::membership_residual(const Mat& X) const {
  if (sen3_N < 0) return std::nullopt;
  const Mat R = X.topLeftCorner(3, 3);
  double r = (R.transpose() * R - Mat::Identity(3, 3)).norm();
  if (R.determinant() <= 0.0) r += 1.0;
  if (n > 3) {
    r += X.bottomLeftCorner(n - 3, 3).norm();
    r += (X.bottomRightCorner(n - 3, n - 3) - Mat::Identity(n - 3, n - 3)).norm();
  }
  return r;
}

ModelPtr make_generic_model(std::string name, int n, std::vector<Mat> basis) {
  auto m = std::make_shared<GroupModel>(std::move(name), n,
                                        static_cast<int>(basis.size()),
                                        std::move(basis));
  m->validate();
  return m;
}

GroupElement::GroupElement(ModelPtr m, Mat X) : model(std::move(m)), mat(std::move(X)) {
  if (!model) throw std::invalid_argument("GroupElement: null model");
  if (mat.rows() != model->n || mat.cols() != model->n)
    throw std::invalid_argument("GroupElement: matrix is not n x n");
  if (!mat.allFinite())
    throw std::invalid_argument("GroupElement: non-finite entries");
  Eigen::PartialPivLU<Mat> lu(mat);
  if (lu.rcond() < 1e-14)
    throw std::invalid_argument("GroupElement: matrix numerically singular");
  if (auto r = model->membership_residual(mat); r && *r > 1e-9)
    throw std::invalid_argument("GroupElement: failed membership test for " +
                                model->name);
}

AlgebraVector::AlgebraVector(ModelPtr m, Vec v)
    : model(std::move(m)), coords(std::move(v)) {
  if (!model) throw std::invalid_argument("AlgebraVector: null model");
  if (coords.size() != model->d)
    throw std::invalid_argument("AlgebraVector: length != d");
}

}  // namespace errdyn
