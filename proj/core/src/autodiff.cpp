#include "pairlink/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pairlink/error.hpp"
#include "pairlink/parameters.hpp"

namespace pairlink {

// ---- Tensor -------------------------------------------------------------

const Matrix& Tensor::value() const {
  if (!tape_) throw UsageError("empty tensor handle");
  return tape_->value_of(id_);
}

const Matrix& Tensor::grad() const {
  if (!tape_) throw UsageError("empty tensor handle");
  return tape_->grad_of(id_);
}

bool Tensor::requires_grad() const { return tape_ && tape_->requires_grad(id_); }

double Tensor::item() const {
  const auto& v = value();
  if (v.rows() != 1 || v.cols() != 1) throw DimensionError("item() on " + v.shape_string());
  return v(0, 0);
}

// ---- Tape ---------------------------------------------------------------

Tensor Tape::constant(Matrix value) {
  if (!value.all_finite()) throw NumericError("constant holds a non-finite value");
  nodes_.push_back(Node{std::move(value), {}, false, nullptr, {}});
  return Tensor(this, nodes_.size() - 1);
}

Tensor Tape::parameter(Parameter& p) {
  if (!p.value.all_finite()) throw NumericError("parameter holds a non-finite value");
  nodes_.push_back(Node{p.value, {}, true, &p, {}});
  return Tensor(this, nodes_.size() - 1);
}

Tensor Tape::record(Matrix value, std::initializer_list<Tensor> inputs, Backprop backprop,
                    std::string_view op) {
  bool needs_grad = false;
  for (const auto& in : inputs) {
    check_owned(in);
    needs_grad = needs_grad || nodes_[in.id_].requires_grad;
  }
  if (!value.all_finite()) {
    throw NumericError(std::string(op) + " produced a non-finite value");
  }
  nodes_.push_back(Node{std::move(value), {}, needs_grad, nullptr,
                        needs_grad ? std::move(backprop) : Backprop{}});
  return Tensor(this, nodes_.size() - 1);
}

void Tape::check_owned(const Tensor& t) const {
  if (t.tape_ != this || t.id_ >= nodes_.size()) {
    throw UsageError("tensor was not produced by this tape");
  }
}

const Matrix& Tape::value_of(std::size_t id) const { return nodes_.at(id).value; }

const Matrix& Tape::grad_of(std::size_t id) const {
  const auto& n = nodes_.at(id);
  if (!n.requires_grad) throw UsageError("tensor does not require grad");
  return n.grad;
}

bool Tape::requires_grad(std::size_t id) const { return nodes_.at(id).requires_grad; }

Matrix& Tape::grad_buffer(std::size_t id) {
  auto& n = nodes_.at(id);
  if (n.grad.rows() != n.value.rows() || n.grad.cols() != n.value.cols()) {
    n.grad = Matrix(n.value.rows(), n.value.cols());
  }
  return n.grad;
}

void Tape::accumulate(std::size_t id, const Matrix& delta) {
  if (!nodes_.at(id).requires_grad) return;
  auto& g = grad_buffer(id);
  auto gd = g.data();
  auto dd = delta.data();
  for (std::size_t i = 0; i < gd.size(); ++i) gd[i] += dd[i];
}

void Tape::backward(const Tensor& loss) {
  check_owned(loss);
  const auto& lv = nodes_[loss.id_].value;
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw DimensionError("backward needs a 1x1 loss, got " + lv.shape_string());
  }
  for (auto& n : nodes_) {
    if (n.requires_grad) n.grad = Matrix(n.value.rows(), n.value.cols());
  }
  if (!nodes_[loss.id_].requires_grad) return;
  nodes_[loss.id_].grad(0, 0) = 1.0;

  for (std::size_t id = loss.id_ + 1; id-- > 0;) {
    auto& n = nodes_[id];
    if (!n.requires_grad) continue;
    if (n.backprop) {
      n.backprop(*this, n.grad);
    } else if (n.param) {
      auto pg = n.param->grad.data();
      if (pg.size() != n.grad.size()) {
        n.param->grad = Matrix(n.value.rows(), n.value.cols());
        pg = n.param->grad.data();
      }
      auto ng = n.grad.data();
      for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += ng[i];
    }
  }
}

void Tape::clear() { nodes_.clear(); }

// ---- primitives ---------------------------------------------------------

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, std::string_view op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + " shape mismatch " + a.shape_string() + " vs " +
                         b.shape_string());
  }
}

Tape& tape_of(const Tensor& a) {
  if (!a.tape()) throw UsageError("empty tensor handle");
  return *a.tape();
}

Tape& tape_of(const Tensor& a, const Tensor& b) {
  if (a.tape() != b.tape()) throw UsageError("operands live on different tapes");
  return tape_of(a);
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

template <class F>
Matrix map(const Matrix& a, F f) {
  Matrix out(a.rows(), a.cols());
  auto ad = a.data();
  auto od = out.data();
  for (std::size_t i = 0; i < ad.size(); ++i) od[i] = f(ad[i]);
  return out;
}

// Elementwise unary op whose derivative is a function of (input, output).
template <class F, class D>
Tensor unary(const Tensor& a, std::string_view name, F f, D dfdx) {
  Tape& tape = tape_of(a);
  Matrix out = map(a.value(), f);
  const std::size_t ia = a.id();
  return tape.record(
      std::move(out), {a},
      [ia, dfdx](Tape& t, const Matrix& g) {
        const Matrix& x = t.value_of(ia);
        Matrix d(x.rows(), x.cols());
        auto xd = x.data();
        auto gd = g.data();
        auto dd = d.data();
        for (std::size_t i = 0; i < xd.size(); ++i) dd[i] = gd[i] * dfdx(xd[i]);
        t.accumulate(ia, d);
      },
      name);
}

double stable_softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  Tape& tape = tape_of(a, b);
  Matrix out = matmul(a.value(), b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return tape.record(
      std::move(out), {a, b},
      [ia, ib](Tape& t, const Matrix& g) {
        if (t.requires_grad(ia)) t.accumulate(ia, matmul(g, transpose(t.value_of(ib))));
        if (t.requires_grad(ib)) t.accumulate(ib, matmul(transpose(t.value_of(ia)), g));
      },
      "matmul");
}

Tensor spmm(const SparseMatrix& s, const Tensor& d) {
  Tape& tape = tape_of(d);
  Matrix out = spmm(s, d.value());
  const std::size_t id = d.id();
  const SparseMatrix* sp = &s;
  return tape.record(
      std::move(out), {d},
      [id, sp](Tape& t, const Matrix& g) {
        // d_grad = S^T g, without materializing the transpose.
        Matrix& dg = t.grad_buffer(id);
        for (std::size_t r = 0; r < sp->rows; ++r) {
          auto grow = g.row(r);
          for (std::size_t k = sp->indptr[r]; k < sp->indptr[r + 1]; ++k) {
            const double w = sp->values[k];
            auto drow = dg.row(sp->indices[k]);
            for (std::size_t j = 0; j < grow.size(); ++j) drow[j] += w * grow[j];
          }
        }
      },
      "spmm");
}

Tensor add(const Tensor& a, const Tensor& b) {
  Tape& tape = tape_of(a, b);
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  const bool broadcast = bv.rows() == 1 && av.rows() != 1 && bv.cols() == av.cols();
  if (!broadcast) require_same_shape(av, bv, "add");
  Matrix out = av;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto orow = out.row(i);
    auto brow = bv.row(broadcast ? 0 : i);
    for (std::size_t j = 0; j < orow.size(); ++j) orow[j] += brow[j];
  }
  const std::size_t ia = a.id(), ib = b.id();
  return tape.record(
      std::move(out), {a, b},
      [ia, ib, broadcast](Tape& t, const Matrix& g) {
        t.accumulate(ia, g);
        if (!t.requires_grad(ib)) return;
        if (!broadcast) {
          t.accumulate(ib, g);
          return;
        }
        Matrix col(1, g.cols());
        for (std::size_t i = 0; i < g.rows(); ++i) {
          auto grow = g.row(i);
          for (std::size_t j = 0; j < grow.size(); ++j) col(0, j) += grow[j];
        }
        t.accumulate(ib, col);
      },
      "add");
}

Tensor sub(const Tensor& a, const Tensor& b) {
  Tape& tape = tape_of(a, b);
  require_same_shape(a.value(), b.value(), "sub");
  Matrix out = a.value();
  auto od = out.data();
  auto bd = b.value().data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] -= bd[i];
  const std::size_t ia = a.id(), ib = b.id();
  return tape.record(
      std::move(out), {a, b},
      [ia, ib](Tape& t, const Matrix& g) {
        t.accumulate(ia, g);
        if (t.requires_grad(ib)) t.accumulate(ib, map(g, [](double x) { return -x; }));
      },
      "sub");
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  Tape& tape = tape_of(a, b);
  require_same_shape(a.value(), b.value(), "hadamard");
  Matrix out = a.value();
  auto od = out.data();
  auto bd = b.value().data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] *= bd[i];
  const std::size_t ia = a.id(), ib = b.id();
  return tape.record(
      std::move(out), {a, b},
      [ia, ib](Tape& t, const Matrix& g) {
        auto prod = [&](std::size_t other) {
          Matrix d = g;
          auto dd = d.data();
          auto od2 = t.value_of(other).data();
          for (std::size_t i = 0; i < dd.size(); ++i) dd[i] *= od2[i];
          return d;
        };
        if (t.requires_grad(ia)) t.accumulate(ia, prod(ib));
        if (t.requires_grad(ib)) t.accumulate(ib, prod(ia));
      },
      "hadamard");
}

Tensor hconcat(const Tensor& a, const Tensor& b) {
  Tape& tape = tape_of(a, b);
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.rows() != bv.rows()) {
    throw DimensionError("hconcat row mismatch " + av.shape_string() + " vs " + bv.shape_string());
  }
  const std::size_t ca = av.cols(), cb = bv.cols();
  Matrix out(av.rows(), ca + cb);
  for (std::size_t i = 0; i < av.rows(); ++i) {
    std::copy(av.row(i).begin(), av.row(i).end(), out.row(i).begin());
    std::copy(bv.row(i).begin(), bv.row(i).end(), out.row(i).begin() + static_cast<std::ptrdiff_t>(ca));
  }
  const std::size_t ia = a.id(), ib = b.id();
  return tape.record(
      std::move(out), {a, b},
      [ia, ib, ca, cb](Tape& t, const Matrix& g) {
        if (t.requires_grad(ia)) {
          Matrix& ga = t.grad_buffer(ia);
          for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < ca; ++j) ga(i, j) += g(i, j);
        }
        if (t.requires_grad(ib)) {
          Matrix& gb = t.grad_buffer(ib);
          for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < cb; ++j) gb(i, j) += g(i, ca + j);
        }
      },
      "hconcat");
}

Tensor relu(const Tensor& a) {
  return unary(
      a, "relu", [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(a, "sigmoid", logistic, [](double x) {
    const double s = logistic(x);
    return s * (1.0 - s);
  });
}

Tensor softplus(const Tensor& a) { return unary(a, "softplus", stable_softplus, logistic); }

Tensor square(const Tensor& a) {
  return unary(
      a, "square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
}

Tensor scale(const Tensor& a, double factor) {
  return unary(
      a, "scale", [factor](double x) { return factor * x; }, [factor](double) { return factor; });
}

Tensor add_scalar(const Tensor& a, double c) {
  return unary(
      a, "add_scalar", [c](double x) { return x + c; }, [](double) { return 1.0; });
}

Tensor row_sum(const Tensor& a) {
  Tape& tape = tape_of(a);
  const Matrix& av = a.value();
  Matrix out(av.rows(), 1);
  for (std::size_t i = 0; i < av.rows(); ++i) {
    double s = 0.0;
    for (double x : av.row(i)) s += x;
    out(i, 0) = s;
  }
  const std::size_t ia = a.id();
  const std::size_t cols = av.cols();
  return tape.record(
      std::move(out), {a},
      [ia, cols](Tape& t, const Matrix& g) {
        Matrix& ga = t.grad_buffer(ia);
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t j = 0; j < cols; ++j) ga(i, j) += g(i, 0);
      },
      "row_sum");
}

Tensor row_mean(const Tensor& a) {
  if (a.value().cols() == 0) throw DimensionError("row_mean of a matrix with no columns");
  return scale(row_sum(a), 1.0 / static_cast<double>(a.value().cols()));
}

Tensor sum(const Tensor& a) {
  Tape& tape = tape_of(a);
  double s = 0.0;
  for (double x : a.value().data()) s += x;
  const std::size_t ia = a.id();
  return tape.record(
      Matrix(1, 1, s), {a},
      [ia](Tape& t, const Matrix& g) {
        Matrix& ga = t.grad_buffer(ia);
        const double gv = g(0, 0);
        for (double& x : ga.data()) x += gv;
      },
      "sum");
}

Tensor mean(const Tensor& a) {
  if (a.value().size() == 0) throw DimensionError("mean of an empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Tensor gather_rows(const Tensor& a, std::span<const std::size_t> rows) {
  Tape& tape = tape_of(a);
  const Matrix& av = a.value();
  Matrix out(rows.size(), av.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= av.rows()) {
      throw IndexError("gather row " + std::to_string(rows[i]) + " out of range for " +
                       av.shape_string());
    }
    std::copy(av.row(rows[i]).begin(), av.row(rows[i]).end(), out.row(i).begin());
  }
  const std::size_t ia = a.id();
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  return tape.record(
      std::move(out), {a},
      [ia, idx = std::move(idx)](Tape& t, const Matrix& g) {
        Matrix& ga = t.grad_buffer(ia);
        for (std::size_t i = 0; i < idx.size(); ++i) {
          auto dst = ga.row(idx[i]);
          auto src = g.row(i);
          for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
        }
      },
      "gather_rows");
}

Tensor dropout(const Tensor& a, double p, Mode mode, Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) throw ValidationError("dropout probability must be in [0, 1)");
  if (mode == Mode::eval || p == 0.0) return a;
  Tape& tape = tape_of(a);
  const Matrix& av = a.value();
  Matrix mask(av.rows(), av.cols());
  std::bernoulli_distribution keep(1.0 - p);
  const double scale_by = 1.0 / (1.0 - p);
  for (double& m : mask.data()) m = keep(rng) ? scale_by : 0.0;
  Matrix out = av;
  auto od = out.data();
  auto md = mask.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] *= md[i];
  const std::size_t ia = a.id();
  return tape.record(
      std::move(out), {a},
      [ia, mask = std::move(mask)](Tape& t, const Matrix& g) {
        Matrix d = g;
        auto dd = d.data();
        auto mdd = mask.data();
        for (std::size_t i = 0; i < dd.size(); ++i) dd[i] *= mdd[i];
        t.accumulate(ia, d);
      },
      "dropout");
}

}  // namespace pairlink
