#pragma once

/// The Hopf *-algebra of matrix coefficients of the unitarizable
/// finite-dimensional representations: products via Clebsch-Gordan
/// decomposition, star structure through the contragredient identification,
/// bigrading, Haar functionals, the distinguished elements b_w, and the
/// localization with the polar generators |b|_w, u_w.

#include <qborel/reps.hpp>

#include <map>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qb {

/// Kronecker product with row index i*rows(b)+k, column j*cols(b)+l.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Shared numeric representation data at a fixed 0 < q < 1: lazily built
/// irreducibles, contragredient intertwiners and Clebsch-Gordan isometries.
class PolContext {
 public:
  struct CGSummand {
    Weight mu;
    Mat isom;  // dim(V_a (x) V_b) x dim(V_mu), isometric intertwiner
  };

  PolContext(CtxPtr ctx, double q) : ctx_(ctx), q_(q) {}

  CtxPtr uq() const { return ctx_; }
  const RootDatum& rd() const { return ctx_->rd(); }
  double q() const { return q_; }
  double qpow(const Rational& e) const {
    return std::pow(q_, static_cast<double>(e));
  }

  const Irrep& rep(const Weight& hw) {
    auto it = reps_.find(hw);
    if (it == reps_.end())
      it = reps_.emplace(hw, std::make_unique<Irrep>(ctx_, hw, q_)).first;
    return *it->second;
  }

  /// Conjugate weight -w0(hw).
  Weight bar(const Weight& hw) const { return wneg(rd().w0_act(hw)); }

  /// Intertwiner from the conjugate basis of V_hw to V_{-w0 hw}.
  const Mat& contra(const Weight& hw) {
    auto it = contra_.find(hw);
    if (it == contra_.end()) {
      Mat m = contragredient_intertwiner(rep(hw), rep(bar(hw)));
      it = contra_.emplace(hw, std::move(m)).first;
    }
    return it->second;
  }

  /// Decomposition of V_a (x) V_b into irreducibles with isometric ranges.
  const std::vector<CGSummand>& cg(const Weight& a, const Weight& b) {
    auto key = std::make_pair(a, b);
    auto it = cg_.find(key);
    if (it != cg_.end()) return it->second;

    const Irrep& va = rep(a);
    const Irrep& vb = rep(b);
    int da = va.dim(), db = vb.dim();
    int dt = da * db;
    const RootDatum& rdm = rd();
    int rank = rdm.rank();

    std::vector<Weight> wt(dt);
    std::map<Weight, std::vector<int>> byw;
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < db; ++j) {
        int t = i * db + j;
        wt[t] = wadd(va.weight(i), vb.weight(j));
        byw[wt[t]].push_back(t);
      }

    std::vector<Mat> te(rank), tf(rank);
    for (int r = 0; r < rank; ++r) {
      te[r] = kron(va.Em(r), vb.Km(rdm.alpha(r))) +
              kron(Mat::Identity(da, da), vb.Em(r));
      tf[r] = kron(va.Fm(r), Mat::Identity(db, db)) +
              kron(va.Km(wneg(rdm.alpha(r))), vb.Fm(r));
    }

    std::vector<CGSummand> out;
    int total = 0;
    for (const auto& [w, idx] : byw) {
      int k = static_cast<int>(idx.size());
      // Joint kernel of all raising operators restricted to this weight space.
      int nrows = 0;
      std::vector<std::pair<int, const std::vector<int>*>> rowsets;
      for (int r = 0; r < rank; ++r) {
        auto up = byw.find(wadd(w, rdm.alpha(r)));
        const std::vector<int>* rows = up == byw.end() ? nullptr : &up->second;
        rowsets.emplace_back(r, rows);
        if (rows) nrows += static_cast<int>(rows->size());
      }
      Mat sys = Mat::Zero(std::max(nrows, 1), k);
      int row = 0;
      for (const auto& [r, rows] : rowsets) {
        if (!rows) continue;
        for (int t : *rows) {
          for (int c = 0; c < k; ++c) sys(row, c) = te[r](t, idx[c]);
          ++row;
        }
      }
      Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeFullV);
      Vec sv = svd.singularValues();
      double thr = 1e-8 * std::max(1.0, sv.size() ? sv(0) : 0.0);
      int rank_sys = 0;
      for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thr) ++rank_sys;
      int mult = k - rank_sys;
      for (int m = 0; m < mult; ++m) {
        Vec hv = svd.matrixV().col(rank_sys + m);
        for (int r = 0; r < rank; ++r)
          if (w[r] < 0)
            throw std::logic_error("cg: highest weight not dominant");
        // Generate the cyclic module from the highest weight vector.
        Vec full = Vec::Zero(dt);
        for (int c = 0; c < k; ++c) full(idx[c]) = hv(c);
        const Irrep& vm = rep(w);
        Mat isom = Mat::Zero(dt, vm.dim());
        for (int i = 0; i < vm.dim(); ++i) {
          Vec col = Vec::Zero(dt);
          for (const auto& [word, cc] : vm.expansion(i)) {
            Vec v = full;
            for (auto itw = word.rbegin(); itw != word.rend(); ++itw)
              v = tf[*itw] * v;
            col += cc * v;
          }
          isom.col(i) = col;
        }
        out.push_back(CGSummand{w, std::move(isom)});
        total += vm.dim();
      }
    }
    if (total != dt)
      throw std::logic_error("cg: summand dimensions do not add up");
    return cg_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  CtxPtr ctx_;
  double q_;
  std::map<Weight, std::unique_ptr<Irrep>> reps_;
  std::map<Weight, Mat> contra_;
  std::map<std::pair<Weight, Weight>, std::vector<CGSummand>> cg_;
};

using PolCtxPtr = PolContext*;

struct PolBiComp;

/// Element of the matrix-coefficient algebra: a finite sum of blocks
/// (hw, C) standing for sum_{ij} C(i,j) U_hw(e_i, e_j) over the orthonormal
/// weight bases of the numeric irreducibles.
class PolEl {
 public:
  PolEl() : pc_(nullptr) {}
  explicit PolEl(PolCtxPtr pc) : pc_(pc) {}

  static PolEl one(PolCtxPtr pc) {
    PolEl x(pc);
    Mat c(1, 1);
    c(0, 0) = 1.0;
    x.blocks_[wzero(pc->rd().rank())] = c;
    return x;
  }

  /// U_hw(xi, eta) = <xi, pi(.) eta> (antilinear in xi; real data here).
  static PolEl matrix_coeff(PolCtxPtr pc, const Weight& hw, const Vec& xi,
                            const Vec& eta) {
    PolEl x(pc);
    x.blocks_[hw] = xi * eta.transpose();
    return x;
  }
  static PolEl matrix_unit(PolCtxPtr pc, const Weight& hw, int i, int j) {
    const Irrep& v = pc->rep(hw);
    Vec a = Vec::Zero(v.dim()), b = Vec::Zero(v.dim());
    a(i) = 1.0;
    b(j) = 1.0;
    return matrix_coeff(pc, hw, a, b);
  }

  /// b_hw = U_hw(xi_hw, eta_{w0 hw}).
  static PolEl b_el(PolCtxPtr pc, const Weight& hw) {
    const Irrep& v = pc->rep(hw);
    Vec xi = Vec::Zero(v.dim());
    xi(v.highest()) = 1.0;
    return matrix_coeff(pc, hw, xi, v.eta_low());
  }

  PolCtxPtr pc() const { return pc_; }
  const std::map<Weight, Mat>& blocks() const { return blocks_; }
  bool is_zero() const { return blocks_.empty(); }

  PolEl& operator+=(const PolEl& o) {
    if (!pc_) pc_ = o.pc_;
    for (const auto& [w, c] : o.blocks_) {
      auto it = blocks_.find(w);
      if (it == blocks_.end())
        blocks_[w] = c;
      else
        it->second += c;
    }
    return *this;
  }
  PolEl operator+(const PolEl& o) const {
    PolEl r = *this;
    r += o;
    return r;
  }
  PolEl operator-(const PolEl& o) const { return *this + (-1.0) * o; }
  friend PolEl operator*(double s, const PolEl& x) {
    PolEl r = x;
    for (auto& [w, c] : r.blocks_) c *= s;
    return r;
  }

  PolEl operator*(const PolEl& o) const {
    PolEl out(pc_);
    for (const auto& [wa, ca] : blocks_)
      for (const auto& [wb, cb] : o.blocks_) {
        Mat big = kron(ca, cb);
        for (const auto& s : pc_->cg(wa, wb)) {
          Mat c = s.isom.transpose() * big * s.isom;
          auto it = out.blocks_.find(s.mu);
          if (it == out.blocks_.end())
            out.blocks_[s.mu] = std::move(c);
          else
            it->second += c;
        }
      }
    out.prune();
    return out;
  }

  /// <x, pi(X) .> pairing with the enveloping algebra: sum of entrywise
  /// contractions against the generator matrices.
  double evaluate(const El& x) const {
    double acc = 0.0;
    for (const auto& [w, c] : blocks_) {
      Mat m = pc_->rep(w).act(x);
      acc += (c.array() * m.array()).sum();
    }
    return acc;
  }

  /// U_hw(xi,eta)^* = q^{-(rho, wt xi - wt eta)} U_{-w0 hw}(bar xi, bar eta).
  PolEl star() const {
    PolEl out(pc_);
    const RootDatum& rdm = pc_->rd();
    for (const auto& [w, c] : blocks_) {
      const Irrep& v = pc_->rep(w);
      const Mat& m = pc_->contra(w);
      Mat d = c;
      for (int i = 0; i < v.dim(); ++i)
        for (int j = 0; j < v.dim(); ++j)
          d(i, j) *= pc_->qpow(
              -rdm.pairing(rdm.rho(), wsub(v.weight(i), v.weight(j))));
      Mat cb = m * d * m.transpose();
      Weight wb = pc_->bar(w);
      auto it = out.blocks_.find(wb);
      if (it == out.blocks_.end())
        out.blocks_[wb] = std::move(cb);
      else
        it->second += cb;
    }
    return out;
  }

  /// Haar state: the trivial-representation component.
  double haar() const {
    auto it = blocks_.find(wzero(pc_->rd().rank()));
    return it == blocks_.end() ? 0.0 : it->second(0, 0);
  }

  /// Counit: evaluation at the identity group element, eps(U(xi,eta))=<xi,eta>.
  double counit() const {
    double acc = 0.0;
    for (const auto& [w, c] : blocks_) acc += c.trace();
    return acc;
  }

  /// Coproduct Delta(U(e_i,e_j)) = sum_k U(e_i,e_k) (x) U(e_k,e_j), returned
  /// as a finite list of simple tensors: for each block and each (i,k) the
  /// pair (U(e_i,e_k), sum_j C(i,j) U(e_k,e_j)).
  std::vector<std::pair<PolEl, PolEl>> coproduct() const {
    std::vector<std::pair<PolEl, PolEl>> out;
    for (const auto& [w, c] : blocks_) {
      int d = pc_->rep(w).dim();
      for (int i = 0; i < d; ++i) {
        if (c.row(i).norm() == 0.0) continue;
        for (int k = 0; k < d; ++k) {
          PolEl left(pc_), right(pc_);
          Mat lm = Mat::Zero(d, d), rm = Mat::Zero(d, d);
          lm(i, k) = 1.0;
          rm.row(k) = c.row(i);
          left.blocks_[w] = std::move(lm);
          right.blocks_[w] = std::move(rm);
          out.emplace_back(std::move(left), std::move(right));
        }
      }
    }
    return out;
  }

  /// Bihomogeneous split: groups entries by (lwt, rwt) = (wt(e_i), wt(e_j)).
  std::vector<PolBiComp> bicomponents() const;

  double norm() const {
    double s = 0.0;
    for (const auto& [w, c] : blocks_) s += c.squaredNorm();
    return std::sqrt(s);
  }

  void prune(double tol = 0.0) {
    for (auto it = blocks_.begin(); it != blocks_.end();) {
      if (it->second.norm() <= tol)
        it = blocks_.erase(it);
      else
        ++it;
    }
  }

 private:
  PolCtxPtr pc_;
  std::map<Weight, Mat> blocks_;
};

/// One bihomogeneous component of a matrix-coefficient element.
struct PolBiComp {
  Weight lwt, rwt;
  PolEl part;
};

inline std::vector<PolBiComp> PolEl::bicomponents() const {
  std::map<std::pair<Weight, Weight>, PolEl> acc;
  for (const auto& [w, c] : blocks_) {
    const Irrep& v = pc_->rep(w);
    for (int i = 0; i < v.dim(); ++i)
      for (int j = 0; j < v.dim(); ++j) {
        if (c(i, j) == 0.0) continue;
        auto key = std::make_pair(v.weight(i), v.weight(j));
        auto it = acc.find(key);
        if (it == acc.end()) it = acc.emplace(key, PolEl(pc_)).first;
        auto bit = it->second.blocks_.find(w);
        if (bit == it->second.blocks_.end())
          bit = it->second.blocks_.emplace(w, Mat::Zero(v.dim(), v.dim()))
                    .first;
        bit->second(i, j) = c(i, j);
      }
  }
  std::vector<PolBiComp> out;
  for (auto& [key, part] : acc)
    out.push_back(PolBiComp{key.first, key.second, std::move(part)});
  return out;
}

/// Element of the localization: normal-ordered sum of u_a |b|_c x with
/// u central, |b|_c x = q^{(c, lwt x - w0 rwt x)} x |b|_c, and the bigrading
/// lwt(u_w) = w, rwt(u_w) = w0 w, lwt(|b|) = rwt(|b|) = 0.
struct LocBiComp;

class LocEl {
 public:
  LocEl() : pc_(nullptr) {}
  explicit LocEl(PolCtxPtr pc) : pc_(pc) {}

  static LocEl from_pol(const PolEl& x) {
    LocEl r(x.pc());
    int rank = x.pc()->rd().rank();
    if (!x.is_zero()) r.terms_[{wzero(rank), wzero(rank)}] = x;
    return r;
  }
  static LocEl u_el(PolCtxPtr pc, const Weight& w) {
    LocEl r(pc);
    r.terms_[{w, wzero(pc->rd().rank())}] = PolEl::one(pc);
    return r;
  }
  static LocEl babs_el(PolCtxPtr pc, const Weight& w) {
    LocEl r(pc);
    r.terms_[{wzero(pc->rd().rank()), w}] = PolEl::one(pc);
    return r;
  }
  /// b_w = u_w |b|_w for general lattice w.
  static LocEl b_formal(PolCtxPtr pc, const Weight& w) {
    LocEl r(pc);
    r.terms_[{w, w}] = PolEl::one(pc);
    return r;
  }

  PolCtxPtr pc() const { return pc_; }
  const std::map<std::pair<Weight, Weight>, PolEl>& terms() const {
    return terms_;
  }

  LocEl& operator+=(const LocEl& o) {
    if (!pc_) pc_ = o.pc_;
    for (const auto& [k, x] : o.terms_) {
      auto it = terms_.find(k);
      if (it == terms_.end())
        terms_[k] = x;
      else
        it->second += x;
    }
    prune();
    return *this;
  }
  LocEl operator+(const LocEl& o) const {
    LocEl r = *this;
    r += o;
    return r;
  }
  LocEl operator-(const LocEl& o) const { return *this + (-1.0) * o; }
  friend LocEl operator*(double s, const LocEl& x) {
    LocEl r = x;
    for (auto& [k, p] : r.terms_) p = s * p;
    return r;
  }

  LocEl operator*(const LocEl& o) const {
    const RootDatum& rdm = pc_->rd();
    LocEl out(pc_);
    for (const auto& [ka, xa] : terms_)
      for (const auto& [kb, xb] : o.terms_) {
        // (u_a1 |b|_c1 xa)(u_a2 |b|_c2 xb): move u_a2 left (central), then
        // xa past |b|_c2 componentwise.
        Weight ua = wadd(ka.first, kb.first);
        Weight ba = wadd(ka.second, kb.second);
        for (const auto& bc : xa.bicomponents()) {
          Rational e = -rdm.pairing(
              kb.second, wsub(bc.lwt, rdm.w0_act(bc.rwt)));
          PolEl prod = (pc_->qpow(e)) * (bc.part * xb);
          auto key = std::make_pair(ua, ba);
          auto it = out.terms_.find(key);
          if (it == out.terms_.end())
            out.terms_[key] = std::move(prod);
          else
            it->second += prod;
        }
      }
    out.prune();
    return out;
  }

  /// (u_a |b|_c x)^* = u_{-a} q^{-(c, lwt x* - w0 rwt x*)} |b|_c x^*.
  LocEl star() const {
    const RootDatum& rdm = pc_->rd();
    LocEl out(pc_);
    for (const auto& [k, x] : terms_) {
      PolEl xs = x.star();
      for (const auto& bc : xs.bicomponents()) {
        Rational e =
            -rdm.pairing(k.second, wsub(bc.lwt, rdm.w0_act(bc.rwt)));
        auto key = std::make_pair(wneg(k.first), k.second);
        PolEl term = pc_->qpow(e) * bc.part;
        auto it = out.terms_.find(key);
        if (it == out.terms_.end())
          out.terms_[key] = std::move(term);
        else
          it->second += term;
      }
    }
    out.prune();
    return out;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& [k, x] : terms_) s += x.norm() * x.norm();
    return std::sqrt(s);
  }

  /// Split by total bigrading: lwt(u_a |b|_c x) = a + lwt(x),
  /// rwt(u_a |b|_c x) = w0 a + rwt(x).
  std::vector<LocBiComp> bicomponents() const;

  void prune(double tol = 0.0) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second.prune(tol);
      if (it->second.is_zero())
        it = terms_.erase(it);
      else
        ++it;
    }
  }

 private:
  PolCtxPtr pc_;
  std::map<std::pair<Weight, Weight>, PolEl> terms_;
};

/// One bihomogeneous component of a localized element.
struct LocBiComp {
  Weight lwt, rwt;
  LocEl part;
};

inline std::vector<LocBiComp> LocEl::bicomponents() const {
  const RootDatum& rdm = pc_->rd();
  std::map<std::pair<Weight, Weight>, LocEl> acc;
  for (const auto& [k, x] : terms_)
    for (const auto& bc : x.bicomponents()) {
      Weight lw = wadd(k.first, bc.lwt);
      Weight rw = wadd(rdm.w0_act(k.first), bc.rwt);
      auto key = std::make_pair(lw, rw);
      auto it = acc.find(key);
      if (it == acc.end()) it = acc.emplace(key, LocEl(pc_)).first;
      auto tit = it->second.terms_.find(k);
      if (tit == it->second.terms_.end())
        it->second.terms_[k] = bc.part;
      else
        tit->second += bc.part;
    }
  std::vector<LocBiComp> out;
  for (auto& [key, part] : acc)
    out.push_back(LocBiComp{key.first, key.second, std::move(part)});
  return out;
}

/// Independent Haar oracle: solve the left-and-right invariance equations on
/// span{U_w(e_i,e_j) : w in cutoff list, plus 1}; returns the per-block
/// functional values normalized by h(1)=1, asserting a one-dimensional
/// solution space.  Block values are matrices h_w with h(U_w(e_i,e_j)) =
/// h_w(i,j).
inline std::map<Weight, Mat> haar_oracle(PolCtxPtr pc,
                                         const std::vector<Weight>& cutoff) {
  // Unknowns: h_w(i,j) per listed w (trivial rep included implicitly with
  // value h(1)).  Left invariance (h (x) id)Delta U_w(e_i,e_j) =
  // h(U_w(e_i,e_j)) 1 reads: sum_k h_w(i,k) U_w(e_k,e_j) = h_w(i,j) 1.
  // Matrix coefficients of inequivalent or equal nontrivial irreducibles are
  // linearly independent, and independent from 1; equating coefficients
  // yields the linear system below.  Right invariance is the mirror image.
  std::vector<std::pair<Weight, std::pair<int, int>>> unknowns;
  std::map<Weight, int> base;
  int rank = pc->rd().rank();
  Weight triv = wzero(rank);
  int nu = 0;
  for (const Weight& w : cutoff) {
    if (w == triv) continue;
    base[w] = nu;
    int d = pc->rep(w).dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) unknowns.push_back({w, {i, j}});
    nu += d * d;
  }
  // h(1) is one more unknown (index nu).
  struct Entry {
    int r, c;
    double v;
    int row() const { return r; }
    int col() const { return c; }
    double value() const { return v; }
  };
  std::vector<Entry> trips;
  int row = 0;
  for (const auto& [w, b] : base) {
    int d = pc->rep(w).dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          // Coefficient of U_w(e_k,e_j) in the left-invariance equation for
          // (i,j): h_w(i,k); the right-hand side h_w(i,j)*1 contributes to
          // the basis element 1 only, giving h_w(i,j) = 0 as well.  Both
          // families reduce to h_w = 0; we keep them as explicit rows so the
          // solver, not the argument above, produces the conclusion.
          trips.push_back({row++, b + i * d + k, 1.0});
        }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) trips.push_back({row++, b + i * d + j, 1.0});
  }
  Mat sys = Mat::Zero(std::max(row, 1), nu + 1);
  for (const auto& t : trips) sys(t.row(), t.col()) += t.value();
  Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeFullV);
  Vec sv = svd.singularValues();
  double thr = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  if (nu + 1 - r != 1)
    throw std::logic_error("haar_oracle: invariant functional not unique");
  Vec h = svd.matrixV().col(nu);
  if (std::abs(h(nu)) < 1e-12)
    throw std::logic_error("haar_oracle: vanishing normalization");
  h /= h(nu);
  std::map<Weight, Mat> out;
  out[triv] = Mat::Ones(1, 1);
  for (const auto& [w, b] : base) {
    int d = pc->rep(w).dim();
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = h(b + i * d + j);
    out[w] = m;
  }
  return out;
}

/// Evaluate a functional given by per-block matrices on an element.
inline double apply_functional(const std::map<Weight, Mat>& h, const PolEl& x) {
  double acc = 0.0;
  for (const auto& [w, c] : x.blocks()) {
    auto it = h.find(w);
    if (it == h.end()) continue;
    acc += (c.array() * it->second.array()).sum();
  }
  return acc;
}

/// Dominant weights w with (rho, w) <= (rho, bound)-style height cutoff:
/// all w in P+ with w <= bound coefficientwise... enumerated as the box
/// 0 <= w_r <= bound_r.
inline std::vector<Weight> dominant_box(const RootDatum& rd,
                                        const Weight& bound) {
  std::vector<Weight> out;
  Weight cur(rd.rank(), 0);
  while (true) {
    out.push_back(cur);
    int pos = rd.rank() - 1;
    while (pos >= 0) {
      if (cur[pos] < bound[pos]) {
        ++cur[pos];
        break;
      }
      cur[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

}  // namespace qb
