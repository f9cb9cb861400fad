#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qaff {

// Basis label: one integer tuple per tensor position, compared lexicographically.
struct Label {
  std::vector<std::vector<int>> parts;

  Label() = default;
  Label(std::initializer_list<int> single) : parts{std::vector<int>(single)} {}
  explicit Label(std::vector<std::vector<int>> p) : parts(std::move(p)) {}

  static Label site(int mode, int weight) { return Label{mode, weight}; }

  friend bool operator==(const Label& a, const Label& b) { return a.parts == b.parts; }
  friend bool operator!=(const Label& a, const Label& b) { return !(a == b); }
  friend bool operator<(const Label& a, const Label& b) { return a.parts < b.parts; }

  friend Label tensor(const Label& a, const Label& b) {
    Label r = a;
    r.parts.insert(r.parts.end(), b.parts.begin(), b.parts.end());
    return r;
  }

  std::string str() const {
    std::string s;
    for (size_t p = 0; p < parts.size(); ++p) {
      if (p) s += "|";
      for (size_t k = 0; k < parts[p].size(); ++k) {
        if (k) s += ",";
        s += std::to_string(parts[p][k]);
      }
    }
    return s;
  }
};

using Basis = std::vector<Label>;

struct BasisMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class F>
using SparseVec = std::map<int, F>;

template <class F>
void axpy(SparseVec<F>& y, const F& a, const SparseVec<F>& x) {
  if (a.is_zero()) return;
  for (const auto& [k, v] : x) {
    auto it = y.find(k);
    if (it == y.end()) {
      F t = a * v;
      if (!t.is_zero()) y.emplace(k, std::move(t));
    } else {
      it->second += a * v;
      if (it->second.is_zero()) y.erase(it);
    }
  }
}

// Sparse matrix with labelled rows and columns; no stored zeros.
template <class F>
class Mat {
 public:
  Mat() = default;
  Mat(Basis rows, Basis cols) : rows_(std::move(rows)), cols_(std::move(cols)), data_(rows_.size()) {}

  static Mat identity(const Basis& b) {
    Mat m(b, b);
    for (size_t k = 0; k < b.size(); ++k) m.data_[k].emplace(int(k), F::one());
    return m;
  }
  static Mat diagonal(const Basis& b, const std::vector<F>& d) {
    Mat m(b, b);
    for (size_t k = 0; k < b.size(); ++k) m.set(int(k), int(k), d[k]);
    return m;
  }

  size_t nrows() const { return rows_.size(); }
  size_t ncols() const { return cols_.size(); }
  const Basis& rows() const { return rows_; }
  const Basis& cols() const { return cols_; }
  const SparseVec<F>& row(int r) const { return data_[size_t(r)]; }

  F at(int r, int c) const {
    const auto& row = data_[size_t(r)];
    auto it = row.find(c);
    return it == row.end() ? F::zero() : it->second;
  }
  void set(int r, int c, F v) {
    auto& row = data_[size_t(r)];
    if (v.is_zero()) row.erase(c);
    else row[c] = std::move(v);
  }
  void add(int r, int c, const F& v) {
    if (v.is_zero()) return;
    auto& row = data_[size_t(r)];
    auto it = row.find(c);
    if (it == row.end()) row.emplace(c, v);
    else {
      it->second += v;
      if (it->second.is_zero()) row.erase(it);
    }
  }

  size_t nnz() const {
    size_t n = 0;
    for (const auto& r : data_) n += r.size();
    return n;
  }
  bool is_zero() const {
    for (const auto& r : data_)
      if (!r.empty()) return false;
    return true;
  }
  bool is_square() const { return rows_ == cols_; }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Mat& operator+=(const Mat& o) {
    check_same_shape(o);
    for (size_t r = 0; r < data_.size(); ++r) axpy(data_[r], F::one(), o.data_[r]);
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    check_same_shape(o);
    F m1 = -F::one();
    for (size_t r = 0; r < data_.size(); ++r) axpy(data_[r], m1, o.data_[r]);
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  Mat scaled(const F& s) const {
    Mat m(rows_, cols_);
    if (s.is_zero()) return m;
    for (size_t r = 0; r < data_.size(); ++r)
      for (const auto& [c, v] : data_[r]) m.data_[r].emplace(c, v * s);
    return m;
  }
  friend Mat operator*(const F& s, const Mat& m) { return m.scaled(s); }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw BasisMismatch("matmul: column basis of left factor differs from row basis of right");
    Mat m(a.rows_, b.cols_);
    for (size_t r = 0; r < a.data_.size(); ++r)
      for (const auto& [k, v] : a.data_[r]) axpy(m.data_[r], v, b.data_[size_t(k)]);
    return m;
  }

  SparseVec<F> apply(const SparseVec<F>& x) const {
    SparseVec<F> y;
    for (size_t r = 0; r < data_.size(); ++r) {
      F acc = F::zero();
      for (const auto& [c, v] : data_[r]) {
        auto it = x.find(c);
        if (it != x.end()) acc += v * it->second;
      }
      if (!acc.is_zero()) y.emplace(int(r), std::move(acc));
    }
    return y;
  }
  // column c as a sparse vector
  SparseVec<F> column(int c) const {
    SparseVec<F> y;
    for (size_t r = 0; r < data_.size(); ++r) {
      auto it = data_[r].find(c);
      if (it != data_[r].end()) y.emplace(int(r), it->second);
    }
    return y;
  }

  Mat transpose() const {
    Mat m(cols_, rows_);
    for (size_t r = 0; r < data_.size(); ++r)
      for (const auto& [c, v] : data_[r]) m.data_[size_t(c)].emplace(int(r), v);
    return m;
  }

  template <class Fn>
  auto map(Fn&& fn) const -> Mat<decltype(fn(std::declval<const F&>()))> {
    using G = decltype(fn(std::declval<const F&>()));
    Mat<G> m(rows_, cols_);
    for (size_t r = 0; r < data_.size(); ++r)
      for (const auto& [c, v] : data_[r]) m.set(int(r), c, fn(v));
    return m;
  }

  // keep the listed columns (by index), in the given order
  Mat select_cols(const std::vector<int>& idx) const {
    Basis cb;
    std::map<int, int> where;
    for (size_t k = 0; k < idx.size(); ++k) {
      cb.push_back(cols_[size_t(idx[k])]);
      where[idx[k]] = int(k);
    }
    Mat m(rows_, cb);
    for (size_t r = 0; r < data_.size(); ++r)
      for (const auto& [c, v] : data_[r]) {
        auto it = where.find(c);
        if (it != where.end()) m.data_[r].emplace(it->second, v);
      }
    return m;
  }
  Mat select_rows(const std::vector<int>& idx) const {
    Basis rb;
    for (int k : idx) rb.push_back(rows_[size_t(k)]);
    Mat m(rb, cols_);
    for (size_t k = 0; k < idx.size(); ++k) m.data_[k] = data_[size_t(idx[k])];
    return m;
  }

  friend Mat kron(const Mat& a, const Mat& b) {
    Basis rb, cb;
    rb.reserve(a.nrows() * b.nrows());
    cb.reserve(a.ncols() * b.ncols());
    for (const auto& x : a.rows_)
      for (const auto& y : b.rows_) rb.push_back(tensor(x, y));
    for (const auto& x : a.cols_)
      for (const auto& y : b.cols_) cb.push_back(tensor(x, y));
    Mat m(std::move(rb), std::move(cb));
    const int bc = int(b.ncols());
    for (size_t ra = 0; ra < a.data_.size(); ++ra)
      for (const auto& [ca, va] : a.data_[ra])
        for (size_t rbi = 0; rbi < b.data_.size(); ++rbi)
          for (const auto& [cbi, vb] : b.data_[rbi])
            m.data_[ra * b.nrows() + rbi].emplace(ca * bc + cbi, va * vb);
    return m;
  }

  int index_of_row(const Label& l) const { return find(rows_, l); }
  int index_of_col(const Label& l) const { return find(cols_, l); }

 private:
  static int find(const Basis& b, const Label& l) {
    for (size_t k = 0; k < b.size(); ++k)
      if (b[k] == l) return int(k);
    return -1;
  }
  void check_same_shape(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw BasisMismatch("matrix bases differ");
  }

  Basis rows_, cols_;
  std::vector<SparseVec<F>> data_;
};

// ---------------------------------------------------------------- elimination

template <class F>
struct Echelon {
  std::vector<SparseVec<F>> rows;  // reduced rows, pivot coefficient 1
  std::vector<int> pivots;         // pivot column of each row
  size_t ncols = 0;
};

namespace detail {

template <class F>
int pivot_cost(const F& x) {
  return x.term_count();
}

// Gauss-Jordan on sparse rows; pivot = smallest term count, ties by row order.
template <class F>
Echelon<F> rref_sparse(std::vector<SparseVec<F>> rows, size_t ncols) {
  Echelon<F> e;
  e.ncols = ncols;
  std::vector<bool> used(rows.size(), false);
  std::vector<size_t> order;
  for (size_t c = 0; c < ncols; ++c) {
    int best = -1, best_cost = 0;
    for (size_t r = 0; r < rows.size(); ++r) {
      if (used[r]) continue;
      auto it = rows[r].find(int(c));
      if (it == rows[r].end()) continue;
      int cost = pivot_cost(it->second);
      if (best < 0 || cost < best_cost) {
        best = int(r);
        best_cost = cost;
      }
    }
    if (best < 0) continue;
    used[size_t(best)] = true;
    SparseVec<F>& pr = rows[size_t(best)];
    F inv = F::one() / pr.at(int(c));
    for (auto& [k, v] : pr) v *= inv;
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == size_t(best)) continue;
      auto it = rows[r].find(int(c));
      if (it == rows[r].end()) continue;
      F f = -it->second;
      axpy(rows[r], f, pr);
    }
    e.pivots.push_back(int(c));
    order.push_back(size_t(best));
  }
  for (size_t b : order) e.rows.push_back(std::move(rows[b]));
  return e;
}

template <class F>
Echelon<F> rref_dense(const std::vector<SparseVec<F>>& srows, size_t ncols) {
  const size_t n = srows.size();
  std::vector<std::vector<F>> a(n, std::vector<F>(ncols, F::zero()));
  for (size_t r = 0; r < n; ++r)
    for (const auto& [c, v] : srows[r]) a[r][size_t(c)] = v;
  Echelon<F> e;
  e.ncols = ncols;
  std::vector<bool> used(n, false);
  std::vector<size_t> order;
  for (size_t c = 0; c < ncols; ++c) {
    int best = -1, best_cost = 0;
    for (size_t r = 0; r < n; ++r) {
      if (used[r] || a[r][c].is_zero()) continue;
      int cost = pivot_cost(a[r][c]);
      if (best < 0 || cost < best_cost) {
        best = int(r);
        best_cost = cost;
      }
    }
    if (best < 0) continue;
    size_t b = size_t(best);
    used[b] = true;
    F inv = F::one() / a[b][c];
    for (size_t k = 0; k < ncols; ++k)
      if (!a[b][k].is_zero()) a[b][k] *= inv;
    for (size_t r = 0; r < n; ++r) {
      if (r == b || a[r][c].is_zero()) continue;
      F f = a[r][c];
      for (size_t k = 0; k < ncols; ++k)
        if (!a[b][k].is_zero()) a[r][k] -= f * a[b][k];
    }
    e.pivots.push_back(int(c));
    order.push_back(b);
  }
  for (size_t b : order) {
    SparseVec<F> row;
    for (size_t k = 0; k < ncols; ++k)
      if (!a[b][k].is_zero()) row.emplace(int(k), a[b][k]);
    e.rows.push_back(std::move(row));
  }
  return e;
}

}  // namespace detail

inline constexpr size_t kDenseLimit = 16;

template <class F>
Echelon<F> rref(const Mat<F>& m) {
  std::vector<SparseVec<F>> rows;
  rows.reserve(m.nrows());
  for (size_t r = 0; r < m.nrows(); ++r) rows.push_back(m.row(int(r)));
  if (m.nrows() <= kDenseLimit && m.ncols() <= kDenseLimit) return detail::rref_dense(rows, m.ncols());
  return detail::rref_sparse(std::move(rows), m.ncols());
}

template <class F>
Echelon<F> rref_rows(std::vector<SparseVec<F>> rows, size_t ncols) {
  return detail::rref_sparse(std::move(rows), ncols);
}

template <class F>
size_t rank(const Mat<F>& m) {
  return rref(m).pivots.size();
}

template <class F>
std::vector<SparseVec<F>> kernel_from_echelon(const Echelon<F>& e) {
  std::vector<bool> is_pivot(e.ncols, false);
  for (int p : e.pivots) is_pivot[size_t(p)] = true;
  std::vector<SparseVec<F>> out;
  for (size_t f = 0; f < e.ncols; ++f) {
    if (is_pivot[f]) continue;
    SparseVec<F> v;
    v.emplace(int(f), F::one());
    for (size_t k = 0; k < e.rows.size(); ++k) {
      auto it = e.rows[k].find(int(f));
      if (it != e.rows[k].end()) v.emplace(e.pivots[k], -it->second);
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Right null space; every returned vector is re-verified m v = 0.
template <class F>
std::vector<SparseVec<F>> kernel(const Mat<F>& m) {
  auto out = kernel_from_echelon(rref(m));
  for (const auto& v : out)
    if (!m.apply(v).empty()) throw std::logic_error("kernel: verification failed");
  return out;
}

struct SingularMatrix : std::domain_error {
  using std::domain_error::domain_error;
};

template <class F>
Mat<F> inverse(const Mat<F>& m) {
  if (m.nrows() != m.ncols()) throw BasisMismatch("inverse: matrix not square");
  const size_t n = m.nrows();
  std::vector<SparseVec<F>> rows;
  for (size_t r = 0; r < n; ++r) {
    SparseVec<F> row = m.row(int(r));
    row.emplace(int(n + r), F::one());
    rows.push_back(std::move(row));
  }
  Echelon<F> e = n <= kDenseLimit ? detail::rref_dense(rows, 2 * n) : detail::rref_sparse(std::move(rows), 2 * n);
  if (e.pivots.size() < n || e.pivots[n - 1] >= int(n)) throw SingularMatrix("inverse: singular matrix");
  Mat<F> inv(m.cols(), m.rows());
  for (size_t k = 0; k < n; ++k)
    for (const auto& [c, v] : e.rows[k])
      if (c >= int(n)) inv.set(e.pivots[k], c - int(n), v);
  return inv;
}

// Solve m x = b for square invertible m (dense vectors as sparse maps).
template <class F>
SparseVec<F> solve(const Mat<F>& minv, const SparseVec<F>& b) {
  return minv.apply(b);
}

template <class F>
Mat<F> poly_in(const Mat<F>& m, const std::vector<F>& roots) {
  Mat<F> acc = Mat<F>::identity(m.rows());
  Mat<F> id = acc;
  for (const auto& mu : roots) acc = acc * (m - id.scaled(mu));
  return acc;
}

template <class F>
bool minpoly_check(const Mat<F>& m, const std::vector<F>& roots) {
  if (!m.is_square()) throw BasisMismatch("minpoly_check: matrix not square");
  return poly_in(m, roots).is_zero();
}

struct EigenError : std::domain_error {
  using std::domain_error::domain_error;
};

// Lagrange projector onto the target eigenspace.
template <class F>
Mat<F> eigenprojector(const Mat<F>& m, const std::vector<F>& eigenvalues, const F& target) {
  for (size_t a = 0; a < eigenvalues.size(); ++a)
    for (size_t b = a + 1; b < eigenvalues.size(); ++b)
      if (eigenvalues[a] == eigenvalues[b]) throw EigenError("eigenprojector: repeated eigenvalue");
  if (std::find(eigenvalues.begin(), eigenvalues.end(), target) == eigenvalues.end())
    throw EigenError("eigenprojector: target not among eigenvalues");
  if (!minpoly_check(m, eigenvalues)) throw EigenError("eigenprojector: minimal polynomial not satisfied");
  Mat<F> id = Mat<F>::identity(m.rows());
  Mat<F> p = id;
  F den = F::one();
  for (const auto& mu : eigenvalues) {
    if (mu == target) continue;
    p = p * (m - id.scaled(mu));
    den *= target - mu;
  }
  return p.scaled(F::one() / den);
}

template <class F>
F trace(const Mat<F>& m) {
  F t = F::zero();
  for (size_t k = 0; k < std::min(m.nrows(), m.ncols()); ++k) t += m.at(int(k), int(k));
  return t;
}

}  // namespace qaff
