#include "momtensor/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "momtensor/error.hpp"

namespace momtensor {

namespace {

std::vector<std::size_t> strides_of(const Extents& extents) {
  std::vector<std::size_t> strides(extents.size(), 1);
  for (std::size_t j = extents.size(); j-- > 1;) strides[j - 1] = strides[j] * extents[j];
  return strides;
}

// Visits every multi-index of `extents` in row-major order, passing the
// running linear offset together with two offsets built from per-mode
// strides `sa` and `sb`.
template <class Visit>
void walk(const Extents& extents, const std::vector<std::size_t>& sa, const std::vector<std::size_t>& sb,
          Visit&& visit) {
  const std::size_t order = extents.size();
  std::size_t total = 1;
  for (std::size_t e : extents) total *= e;
  std::vector<std::size_t> idx(order, 0);
  std::size_t oa = 0;
  std::size_t ob = 0;
  for (std::size_t out = 0; out < total; ++out) {
    visit(out, oa, ob);
    for (std::size_t j = order; j-- > 0;) {
      oa += sa[j];
      ob += sb[j];
      if (++idx[j] < extents[j]) break;
      oa -= sa[j] * extents[j];
      ob -= sb[j] * extents[j];
      idx[j] = 0;
    }
  }
}

void require_matrix(const Tensor& m, const char* what) {
  if (m.order() != 2) throw ShapeError(std::string(what) + ": expected an order-2 tensor");
}

// result(.., i, ..) = sum_j A(.., j, ..) * M(i, j)
Tensor mode_contract(const Tensor& a, const Tensor& m, std::size_t mode) {
  if (mode >= a.order()) {
    throw ShapeError("mode " + std::to_string(mode) + " out of range for order " + std::to_string(a.order()));
  }
  const std::size_t inner = a.extent(mode);
  if (m.extent(1) != inner) {
    throw ShapeError("mode product: inner dimension " + std::to_string(m.extent(1)) + " does not match extent " +
                     std::to_string(inner));
  }
  Extents ext = a.extents();
  ext[mode] = m.extent(0);
  Tensor result(ext);

  const auto a_strides = strides_of(a.extents());
  std::vector<std::size_t> sa = a_strides;
  std::vector<std::size_t> sm(ext.size(), 0);
  sa[mode] = 0;
  sm[mode] = inner;
  const std::size_t step = a_strides[mode];

  const auto ad = a.data();
  const auto md = m.data();
  auto out = result.data();
  walk(ext, sa, sm, [&](std::size_t o, std::size_t oa, std::size_t om) {
    double sum = 0.0;
    for (std::size_t j = 0; j < inner; ++j) sum += ad[oa + j * step] * md[om + j];
    out[o] = sum;
  });
  return result;
}

// Contracts the last mode of `t` against vector x.
Tensor contract_last(const Tensor& t, const Tensor& x) {
  const std::size_t n = x.size();
  Extents ext(t.extents().begin(), t.extents().end() - 1);
  Tensor result(ext);
  const auto td = t.data();
  const auto xd = x.data();
  auto out = result.data();
  for (std::size_t o = 0; o < out.size(); ++o) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += td[o * n + j] * xd[j];
    out[o] = sum;
  }
  return result;
}

void require_poly_args(const Tensor& a, const Tensor& x) {
  if (x.order() != 1) throw ShapeError("polynomial argument must be a vector");
  if (!a.is_cubic()) throw ShapeError("polynomial coefficient tensor must be cubic");
  if (a.order() > 0 && a.dimension() != x.size()) {
    throw ShapeError("polynomial dimension " + std::to_string(a.dimension()) + " does not match vector length " +
                     std::to_string(x.size()));
  }
}

std::size_t canonical_offset(const Tensor& a, MultiIndex index) {
  std::sort(index.begin(), index.end());
  return a.offset(index);
}

}  // namespace

Tensor outer_product(const Tensor& a, const Tensor& b, const ModeSet& b_modes) {
  const std::size_t p = a.order();
  const std::size_t q = b.order();
  const std::size_t order = p + q;
  if (b_modes.size() != q) {
    throw ShapeError("outer product: mode set has " + std::to_string(b_modes.size()) + " positions, B has order " +
                     std::to_string(q));
  }
  b_modes.check_within(order);
  const ModeSet a_modes = b_modes.complement(order);

  const auto as = strides_of(a.extents());
  const auto bs = strides_of(b.extents());
  Extents ext(order);
  std::vector<std::size_t> sa(order, 0);
  std::vector<std::size_t> sb(order, 0);
  for (std::size_t j = 0; j < p; ++j) {
    ext[a_modes[j]] = a.extent(j);
    sa[a_modes[j]] = as[j];
  }
  for (std::size_t j = 0; j < q; ++j) {
    ext[b_modes[j]] = b.extent(j);
    sb[b_modes[j]] = bs[j];
  }
  Tensor c(ext);
  const auto ad = a.data();
  const auto bd = b.data();
  auto cd = c.data();
  walk(ext, sa, sb, [&](std::size_t o, std::size_t oa, std::size_t ob) { cd[o] = ad[oa] * bd[ob]; });
  return c;
}

Tensor outer_product(const Tensor& a, const Tensor& b) {
  std::vector<std::size_t> tail(b.order());
  for (std::size_t j = 0; j < tail.size(); ++j) tail[j] = a.order() + j;
  return outer_product(a, b, ModeSet(std::move(tail)));
}

Tensor outer_power(const Tensor& x, std::size_t k) {
  if (k == 0) throw InvalidArgument("outer power needs k >= 1");
  if (x.order() == 1) {
    checked_entry_count(Extents(k, x.size()));
    Tensor acc = x;
    for (std::size_t i = 1; i < k; ++i) acc = outer_product(acc, x);
    return acc;
  }
  if (x.order() == 2) {
    const std::size_t rows = x.extent(0);
    const std::size_t cols = x.extent(1);
    Extents interleaved;
    for (std::size_t i = 0; i < k; ++i) {
      interleaved.push_back(rows);
      interleaved.push_back(cols);
    }
    checked_entry_count(interleaved);
    const Tensor flat = Tensor::vector(std::vector<double>(x.data().begin(), x.data().end()));
    Tensor acc = flat;
    for (std::size_t i = 1; i < k; ++i) acc = outer_product(acc, flat);
    // acc holds modes (i1, j1, i2, j2, ...); move every row mode first.
    const Tensor shaped(interleaved, std::vector<double>(acc.data().begin(), acc.data().end()));
    std::vector<std::size_t> perm;
    for (std::size_t i = 0; i < k; ++i) perm.push_back(2 * i);
    for (std::size_t i = 0; i < k; ++i) perm.push_back(2 * i + 1);
    return permute_modes(shaped, perm);
  }
  throw ShapeError("outer power needs a vector or a matrix");
}

Tensor einstein_product(const Tensor& a, const Tensor& b, const ModeSet& a_modes, const ModeSet& b_modes) {
  const std::size_t r = a_modes.size();
  if (b_modes.size() != r) throw ShapeError("Einstein product: mode sets differ in size");
  if (r == 0) throw InvalidArgument("Einstein product needs at least one contracted pair; use outer_product");
  a_modes.check_within(a.order());
  b_modes.check_within(b.order());
  for (std::size_t j = 0; j < r; ++j) {
    if (a.extent(a_modes[j]) != b.extent(b_modes[j])) {
      throw ShapeError("Einstein product: contracted extents differ at pair " + std::to_string(j));
    }
  }
  const ModeSet a_free = a_modes.complement(a.order());
  const ModeSet b_free = b_modes.complement(b.order());
  const auto as = strides_of(a.extents());
  const auto bs = strides_of(b.extents());

  Extents ext;
  std::vector<std::size_t> sa;
  std::vector<std::size_t> sb;
  for (std::size_t j : a_free.positions()) {
    ext.push_back(a.extent(j));
    sa.push_back(as[j]);
    sb.push_back(0);
  }
  for (std::size_t j : b_free.positions()) {
    ext.push_back(b.extent(j));
    sa.push_back(0);
    sb.push_back(bs[j]);
  }
  Extents cext;
  std::vector<std::size_t> ca;
  std::vector<std::size_t> cb;
  for (std::size_t j = 0; j < r; ++j) {
    cext.push_back(a.extent(a_modes[j]));
    ca.push_back(as[a_modes[j]]);
    cb.push_back(bs[b_modes[j]]);
  }

  Tensor c(ext);
  const auto ad = a.data();
  const auto bd = b.data();
  auto cd = c.data();
  walk(ext, sa, sb, [&](std::size_t o, std::size_t oa, std::size_t ob) {
    double sum = 0.0;
    walk(cext, ca, cb, [&](std::size_t, std::size_t da, std::size_t db) { sum += ad[oa + da] * bd[ob + db]; });
    cd[o] = sum;
  });
  return c;
}

Tensor k_mode_right(const Tensor& a, const Tensor& b, std::size_t mode) {
  require_matrix(b, "k_mode_right");
  return mode_contract(a, transpose(b), mode);
}

Tensor k_mode_left(const Tensor& b, const Tensor& a, std::size_t mode) {
  require_matrix(b, "k_mode_left");
  return mode_contract(a, b, mode);
}

Tensor apply_all_modes(const Tensor& b, const Tensor& a) {
  require_matrix(b, "apply_all_modes");
  if (!a.is_cubic()) throw ShapeError("apply_all_modes: tensor is not cubic");
  Tensor result = a;
  for (std::size_t mode = 0; mode < a.order(); ++mode) result = mode_contract(result, b, mode);
  return result;
}

Tensor tensor4_product(const Tensor& a, const Tensor& b) {
  if (a.order() != 4 || b.order() != 4) throw ShapeError("tensor4_product: operands must have order 4");
  if (!a.is_cubic() || !b.is_cubic()) throw ShapeError("tensor4_product: operands must be cubic");
  if (a.dimension() != b.dimension()) throw ShapeError("tensor4_product: dimensions differ");
  return einstein_product(a, b, ModeSet{2, 3}, ModeSet{0, 1});
}

Tensor identity_tensor4(std::size_t n) {
  Tensor eps({n, n, n, n});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) eps.at({i, j, i, j}) = 1.0;
  }
  return eps;
}

double poly_eval(const Tensor& a, const Tensor& x) {
  require_poly_args(a, x);
  Tensor acc = a;
  while (acc.order() > 0) acc = contract_last(acc, x);
  return acc.data()[0];
}

Tensor contract_to_vector(const Tensor& a, const Tensor& x) {
  require_poly_args(a, x);
  if (a.order() == 0) throw ShapeError("contract_to_vector needs order >= 1");
  Tensor acc = a;
  while (acc.order() > 1) acc = contract_last(acc, x);
  return acc;
}

bool is_symmetric(const Tensor& a, double tol) {
  if (!a.is_cubic()) throw ShapeError("is_symmetric: tensor is not cubic");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> lo(a.size(), inf);
  std::vector<double> hi(a.size(), -inf);
  const auto d = a.data();
  std::size_t off = 0;
  for (IndexCounter it(a.extents()); !it.done(); it.next(), ++off) {
    const std::size_t c = canonical_offset(a, it.index());
    lo[c] = std::min(lo[c], d[off]);
    hi[c] = std::max(hi[c], d[off]);
  }
  for (std::size_t c = 0; c < lo.size(); ++c) {
    if (lo[c] != inf && !(hi[c] - lo[c] <= tol)) return false;
  }
  return true;
}

Tensor symmetrize(const Tensor& a) {
  if (!a.is_cubic()) throw ShapeError("symmetrize: tensor is not cubic");
  std::vector<double> sum(a.size(), 0.0);
  std::vector<std::size_t> count(a.size(), 0);
  std::vector<std::size_t> canon(a.size());
  const auto d = a.data();
  std::size_t off = 0;
  for (IndexCounter it(a.extents()); !it.done(); it.next(), ++off) {
    canon[off] = canonical_offset(a, it.index());
    sum[canon[off]] += d[off];
    ++count[canon[off]];
  }
  Tensor result(a.extents());
  auto out = result.data();
  for (std::size_t o = 0; o < out.size(); ++o) out[o] = sum[canon[o]] / static_cast<double>(count[canon[o]]);
  return result;
}

Tensor permute_modes(const Tensor& a, std::span<const std::size_t> perm) {
  const std::size_t order = a.order();
  if (perm.size() != order) throw ShapeError("permutation length does not match tensor order");
  std::vector<bool> seen(order, false);
  for (std::size_t p : perm) {
    if (p >= order || seen[p]) throw ShapeError("invalid mode permutation");
    seen[p] = true;
  }
  const auto as = strides_of(a.extents());
  Extents ext(order);
  std::vector<std::size_t> sa(order);
  for (std::size_t j = 0; j < order; ++j) {
    ext[j] = a.extent(perm[j]);
    sa[j] = as[perm[j]];
  }
  Tensor result(ext);
  const auto ad = a.data();
  auto out = result.data();
  const std::vector<std::size_t> none(order, 0);
  walk(ext, sa, none, [&](std::size_t o, std::size_t oa, std::size_t) { out[o] = ad[oa]; });
  return result;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  return einstein_product(a, b, ModeSet{1}, ModeSet{0});
}

Tensor transpose(const Tensor& a) {
  require_matrix(a, "transpose");
  const std::size_t perm[2] = {1, 0};
  return permute_modes(a, perm);
}

}  // namespace momtensor
