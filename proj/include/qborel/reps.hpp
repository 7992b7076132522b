#pragma once

/// Finite-dimensional unitarizable highest-weight representations: exact
/// construction through radical quotients of Verma modules, numeric matrices
/// in an orthonormal basis at 0 < q < 1, Lusztig braid operators, and the
/// contragredient intertwiner.

#include <qborel/uq_hopf.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qb {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace reps_detail {

// Extended-precision scalar for the orthonormalization stage: weight-space
// Gram matrices can be badly conditioned, and plain double Cholesky would
// leave relative errors far above roundoff in the generator matrices.
using BF = boost::multiprecision::cpp_bin_float_50;
using BFMat = Eigen::Matrix<BF, Eigen::Dynamic, Eigen::Dynamic>;
using BFVec = Eigen::Matrix<BF, Eigen::Dynamic, 1>;

using RMat = std::vector<std::vector<RatQ>>;

/// Pivot columns of an exact matrix under leftmost-column preference.
inline std::vector<int> pivot_columns(RMat m) {
  int rows = static_cast<int>(m.size());
  int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pr = -1;
    for (int r = row; r < rows; ++r)
      if (!m[r][col].is_zero()) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[pr], m[row]);
    for (int r = 0; r < rows; ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      RatQ f = m[r][col] / m[row][col];
      for (int c2 = col; c2 < cols; ++c2) m[r][c2] -= f * m[row][c2];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Solve A x = b exactly (A square nonsingular).
inline std::vector<RatQ> solve(RMat a, std::vector<RatQ> b) {
  int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int pr = col;
    while (a[pr][col].is_zero()) ++pr;
    std::swap(a[pr], a[col]);
    std::swap(b[pr], b[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      RatQ f = a[r][col] / a[col][col];
      for (int c2 = col; c2 < n; ++c2) a[r][c2] -= f * a[col][c2];
      b[r] -= f * b[col];
    }
  }
  std::vector<RatQ> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace reps_detail

/// Irreducible *-representation V_hw of the compact form with highest weight
/// hw (dominant integral), realized numerically at a fixed 0 < q < 1 in an
/// orthonormal weight basis.  Each basis vector is recorded as an explicit
/// combination of F-word translates of the highest weight vector.
class Irrep {
 public:
  using WordCombo = std::vector<std::pair<std::vector<int>, double>>;

  Irrep(CtxPtr ctx, const Weight& hw, double q) : ctx_(ctx), hw_(hw), q_(q) {
    build();
  }

  CtxPtr ctx() const { return ctx_; }
  const Weight& hw() const { return hw_; }
  double q() const { return q_; }
  int dim() const { return dim_; }
  const Weight& weight(int i) const { return weights_[i]; }
  /// Index of the highest weight unit vector xi_hw.
  int highest() const { return highest_; }
  const Mat& Em(int r) const { return em_[r]; }
  const Mat& Fm(int r) const { return fm_[r]; }
  /// Diagonal action of K_w.
  Mat Km(const Weight& w) const {
    Mat m = Mat::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      m(i, i) = qnum(ctx_->rd().pairing(w, weights_[i]));
    return m;
  }
  /// Basis vector i as a combination of F-word translates of xi_hw.
  const WordCombo& expansion(int i) const { return expansions_[i]; }

  /// Numeric action of a symbolic element of the compact-form presentation.
  Mat act(const El& x) const {
    Mat acc = Mat::Zero(dim_, dim_);
    for (const auto& [m, c] : x.terms()) {
      Mat t = Mat::Identity(dim_, dim_);
      for (int r : m.fword) t = t * fm_[r];
      if (!wis_zero(m.c1)) t = t * Km(m.c1);
      if (!wis_zero(m.c2))
        throw std::invalid_argument("Irrep::act: element has a second lattice");
      for (int r : m.eword) t = t * em_[r];
      acc += ctx_->to_double(c, q_) * t;
    }
    return acc;
  }

  /// Lusztig braid operator T_r.
  Mat braid(int r) const {
    double qr = std::pow(q_, ctx_->rd().d(r));
    // Divided powers E^a/[a]!, F^b/[b]! until they vanish.
    std::vector<Mat> ep = {Mat::Identity(dim_, dim_)};
    std::vector<Mat> fp = {Mat::Identity(dim_, dim_)};
    auto extend = [&](std::vector<Mat>& v, const Mat& g) {
      while (v.back().norm() > 0) {
        int k = static_cast<int>(v.size());
        v.push_back(g * v.back() /
                    ctx_->to_double(ctx_->qint(k, r), q_));
      }
    };
    extend(ep, em_[r]);
    extend(fp, fm_[r]);
    int amax = static_cast<int>(ep.size());
    int bmax = static_cast<int>(fp.size());
    Mat t = Mat::Zero(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
      int n = weights_[j][r];  // <wt, alpha_r^vee>
      for (int a = 0; a < amax; ++a)
        for (int c = 0; c < amax; ++c) {
          int b = n + a + c;
          if (b < 0 || b >= bmax) continue;
          double coeff =
              (b % 2 ? -1.0 : 1.0) * std::pow(qr, static_cast<double>(b - a * c));
          t.col(j) += coeff * (ep[a] * (fp[b] * ep[c].col(j)));
        }
    }
    return t;
  }
  Mat braid_word(const std::vector<int>& word) const {
    Mat t = Mat::Identity(dim_, dim_);
    for (int r : word) t = t * braid(r);
    return t;
  }
  /// Unit lowest weight vector q^{-(rho,hw)} T_{w0} xi_hw.
  Vec eta_low() const {
    Vec xi = Vec::Zero(dim_);
    xi(highest_) = 1.0;
    double s = qnum(-ctx_->rd().pairing(ctx_->rd().rho(), hw_));
    return s * (braid_word(ctx_->rd().w0_word()) * xi);
  }

 private:
  double qnum(const Rational& e) const {
    return std::pow(q_, static_cast<double>(e));
  }

  /// Vector in the Verma module as a combination of basis F-word translates.
  using State = std::map<std::vector<int>, RatQ>;

  static void state_add(State& s, const std::vector<int>& w, const RatQ& c) {
    if (c.is_zero()) return;
    auto it = s.find(w);
    if (it == s.end()) {
      s[w] = c;
    } else {
      it->second += c;
      if (it->second.is_zero()) s.erase(it);
    }
  }

  Weight word_weight(const std::vector<int>& w) const {
    Weight mu = hw_;
    for (int r : w) mu = wsub(mu, ctx_->rd().alpha(r));
    return mu;
  }

  /// E_r (F_w xi) expanded over basis F-words (memoized).
  const State& apply_e(int r, const std::vector<int>& w) {
    auto key = std::make_pair(r, w);
    auto found = ecache_.find(key);
    if (found != ecache_.end()) return found->second;
    State out;
    if (!w.empty()) {
      int s = w.front();
      std::vector<int> rest(w.begin() + 1, w.end());
      // E_r F_s = F_s E_r + delta_rs c_r (K_{alpha_r} - K_{-alpha_r}).
      for (const auto& [iw, ic] : apply_e(r, rest)) {
        std::vector<int> nw = {s};
        nw.insert(nw.end(), iw.begin(), iw.end());
        for (const auto& [bw, bc] : ctx_->reduce_word(nw))
          state_add(out, bw, ic * bc);
      }
      if (r == s) {
        Rational p = ctx_->rd().pairing(ctx_->rd().alpha(r), word_weight(rest));
        RatQ kterm = ctx_->ef_scale(r) * (ctx_->qpow(p) - ctx_->qpow(-p));
        for (const auto& [bw, bc] : ctx_->reduce_word(rest))
          state_add(out, bw, kterm * bc);
      }
    }
    return ecache_.emplace(std::move(key), std::move(out)).first->second;
  }

  /// <F_w xi, F_w2 xi> via F_w^* = (K^{-1}E)-word applied to F_w2 xi.
  RatQ gram_entry(const std::vector<int>& w, const std::vector<int>& w2) {
    State st;
    for (const auto& [bw, bc] : ctx_->reduce_word(w2)) state_add(st, bw, bc);
    for (int s : w) {
      State nxt;
      for (const auto& [sw, sc] : st)
        for (const auto& [ew, ec] : apply_e(s, sw)) state_add(nxt, ew, sc * ec);
      st.clear();
      for (const auto& [sw, sc] : nxt) {
        RatQ k = ctx_->qpow(
            -ctx_->rd().pairing(ctx_->rd().alpha(s), word_weight(sw)));
        st[sw] = sc * k;
      }
    }
    auto it = st.find({});
    return it == st.end() ? RatQ() : it->second;
  }

  struct Block {
    std::vector<int> content;
    Weight mu;
    std::vector<std::vector<int>> span;          // chosen independent F-words
    std::map<std::vector<int>, std::vector<RatQ>> coords;  // word -> span coords
    reps_detail::RMat gram;                      // on span
    reps_detail::BFMat to_on;    // span coords -> orthonormal coords
    reps_detail::BFMat from_on;  // orthonormal coords -> span coords
    int offset = 0;
  };

  /// Evaluate an exact scalar at q in extended precision.
  reps_detail::BF bf_eval(const RatQ& x) const {
    using reps_detail::BF;
    auto evl = [&](const Laurent& l) {
      BF acc = 0;
      for (const auto& [k, c] : l.coeffs()) {
        BF p = k >= 0 ? pow(vq_, k) : 1 / pow(vq_, -k);
        acc += static_cast<BF>(c) * p;
      }
      return acc;
    };
    return evl(x.num()) / evl(x.den());
  }

  void build() {
    using reps_detail::BF;
    vq_ = pow(BF(q_), BF(1) / ctx_->qden());
    const RootDatum& rd = ctx_->rd();
    int rank = rd.rank();
    // Weights of V_hw lie between w0 hw and hw; the root coordinates of
    // hw - w0 hw bound the content box.
    std::vector<Rational> box = rd.root_coords(wsub(hw_, rd.w0_act(hw_)));
    std::vector<int> cap(rank);
    for (int r = 0; r < rank; ++r) {
      if (boost::multiprecision::denominator(box[r]) != 1 || box[r] < 0)
        throw std::invalid_argument("Irrep: highest weight not dominant");
      cap[r] = static_cast<int>(boost::multiprecision::numerator(box[r]));
    }
    std::vector<std::vector<int>> contents;
    std::vector<int> cur;
    enumerate_box(cap, 0, cur, contents);
    std::sort(contents.begin(), contents.end());

    dim_ = 0;
    for (const auto& nu : contents) {
      auto words = ctx_->basis_words(nu);
      std::sort(words.begin(), words.end());
      int n = static_cast<int>(words.size());
      if (n == 0) continue;
      // Exact Gram matrix of the F-word translates.
      reps_detail::RMat g(n, std::vector<RatQ>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = gram_entry(words[i], words[j]);
      auto piv = reps_detail::pivot_columns(g);
      if (piv.empty()) continue;

      Block blk;
      blk.content = nu;
      blk.mu = hw_;
      for (int r = 0; r < rank; ++r)
        blk.mu = wsub(blk.mu, wscale(nu[r], rd.alpha(r)));
      for (int c : piv) blk.span.push_back(words[c]);
      int k = static_cast<int>(piv.size());
      blk.gram.assign(k, std::vector<RatQ>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) blk.gram[i][j] = g[piv[i]][piv[j]];
      // Coordinates of every basis word modulo the radical.
      for (int j = 0; j < n; ++j) {
        std::vector<RatQ> rhs(k);
        for (int i = 0; i < k; ++i) rhs[i] = g[piv[i]][j];
        blk.coords[words[j]] = reps_detail::solve(blk.gram, std::move(rhs));
      }
      // Orthonormalization in extended precision.
      using reps_detail::BF;
      using reps_detail::BFMat;
      BFMat gq(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) gq(i, j) = bf_eval(blk.gram[i][j]);
      Eigen::LLT<BFMat> llt(gq);
      if (llt.info() != Eigen::Success)
        throw std::runtime_error("Irrep: Gram block not positive definite");
      BFMat l = llt.matrixL();
      blk.from_on = l.transpose()
                        .triangularView<Eigen::Upper>()
                        .solve(BFMat::Identity(k, k));
      blk.to_on = l.transpose();
      blk.offset = dim_;
      dim_ += k;
      blocks_.push_back(std::move(blk));
    }

    weights_.resize(dim_);
    expansions_.resize(dim_);
    for (const auto& blk : blocks_) {
      int k = static_cast<int>(blk.span.size());
      for (int i = 0; i < k; ++i) {
        weights_[blk.offset + i] = blk.mu;
        WordCombo combo;
        for (int j = 0; j < k; ++j) {
          double cval = static_cast<double>(blk.from_on(j, i));
          if (cval != 0.0) combo.emplace_back(blk.span[j], cval);
        }
        expansions_[blk.offset + i] = std::move(combo);
      }
      if (wis_zero(blk.content)) highest_ = blk.offset;
    }

    // Generator matrices.
    std::map<std::vector<int>, const Block*> by_content;
    for (const auto& blk : blocks_) by_content[blk.content] = &blk;
    em_.assign(rank, Mat::Zero(dim_, dim_));
    fm_.assign(rank, Mat::Zero(dim_, dim_));
    for (const auto& blk : blocks_) {
      int k = static_cast<int>(blk.span.size());
      for (int r = 0; r < rank; ++r) {
        // F_r: content grows by one in slot r.
        std::vector<int> up = blk.content;
        up[r]++;
        auto itu = by_content.find(up);
        if (itu != by_content.end()) {
          const Block& tgt = *itu->second;
          int kt = static_cast<int>(tgt.span.size());
          reps_detail::BFMat a = reps_detail::BFMat::Zero(kt, k);
          for (int j = 0; j < k; ++j) {
            std::vector<int> w = {r};
            w.insert(w.end(), blk.span[j].begin(), blk.span[j].end());
            for (const auto& [bw, bc] : ctx_->reduce_word(w)) {
              const auto& coord = tgt.coords.at(bw);
              for (int i = 0; i < kt; ++i) a(i, j) += bf_eval(bc * coord[i]);
            }
          }
          set_block(fm_[r], tgt, blk, a);
        }
        // E_r: content drops by one in slot r.
        if (blk.content[r] > 0) {
          std::vector<int> down = blk.content;
          down[r]--;
          auto itd = by_content.find(down);
          if (itd == by_content.end()) continue;  // weight space is radical
          const Block& tgt = *itd->second;
          int kt = static_cast<int>(tgt.span.size());
          reps_detail::BFMat a = reps_detail::BFMat::Zero(kt, k);
          for (int j = 0; j < k; ++j) {
            for (const auto& [bw, bc] : apply_e(r, blk.span[j])) {
              const auto& coord = tgt.coords.at(bw);
              for (int i = 0; i < kt; ++i) a(i, j) += bf_eval(bc * coord[i]);
            }
          }
          set_block(em_[r], tgt, blk, a);
        }
      }
    }
  }

  /// Place the span-coordinate block A as an orthonormal-basis block.
  void set_block(Mat& global, const Block& tgt, const Block& src,
                 const reps_detail::BFMat& a) {
    int kt = static_cast<int>(tgt.span.size());
    int ks = static_cast<int>(src.span.size());
    reps_detail::BFMat b = tgt.to_on * a * src.from_on;
    for (int i = 0; i < kt; ++i)
      for (int j = 0; j < ks; ++j)
        global(tgt.offset + i, src.offset + j) = static_cast<double>(b(i, j));
  }

  static void enumerate_box(const std::vector<int>& cap, int pos,
                            std::vector<int>& cur,
                            std::vector<std::vector<int>>& out) {
    if (pos == static_cast<int>(cap.size())) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= cap[pos]; ++v) {
      cur.push_back(v);
      enumerate_box(cap, pos + 1, cur, out);
      cur.pop_back();
    }
  }

  CtxPtr ctx_;
  Weight hw_;
  double q_;
  reps_detail::BF vq_;  // q^{1/qden}, the evaluation point for exact scalars
  std::map<std::pair<int, std::vector<int>>, State> ecache_;
  int dim_ = 0;
  int highest_ = -1;
  std::vector<Block> blocks_;
  std::vector<Weight> weights_;
  std::vector<WordCombo> expansions_;
  std::vector<Mat> em_, fm_;
};

/// Unitary intertwiner M from the contragredient of V (on the conjugate
/// basis) to Vbar = V_{-w0 hw}: M pibar(x) = pi_{Vbar}(x) M, normalized so
/// that the conjugate highest weight vector maps to the unit lowest weight
/// vector of Vbar.
inline Mat contragredient_intertwiner(const Irrep& v, const Irrep& vbar) {
  CtxPtr ctx = v.ctx();
  if (vbar.hw() != wneg(ctx->rd().w0_act(v.hw())))
    throw std::invalid_argument("contragredient_intertwiner: weight mismatch");
  int d = v.dim();
  if (vbar.dim() != d)
    throw std::invalid_argument("contragredient_intertwiner: dim mismatch");
  // Contragredient action on the conjugate basis: x acts as pi(R(x)^*)
  // entrywise-conjugated; all matrices here are real.
  std::vector<El> gens;
  for (int r = 0; r < ctx->rank(); ++r) {
    gens.push_back(El::E(ctx, Pres::Uqk, r));
    gens.push_back(El::F(ctx, Pres::Uqk, r));
    gens.push_back(El::Ka(ctx, Pres::Uqk, ctx->rd().fundamental(r)));
  }
  int ng = static_cast<int>(gens.size());
  Mat sys = Mat::Zero(ng * d * d, d * d);
  for (int g = 0; g < ng; ++g) {
    Mat a = v.act(star(unitary_antipode(gens[g])));  // contragredient matrix
    Mat b = vbar.act(gens[g]);
    // Constraint M a - b M = 0, vectorized column-major:
    // (a^T (x) I - I (x) b) vec(M) = 0.
    for (int cc = 0; cc < d; ++cc)
      for (int rr = 0; rr < d; ++rr) {
        int row = g * d * d + cc * d + rr;
        for (int k = 0; k < d; ++k) {
          sys(row, k * d + rr) += a(k, cc);
          sys(row, cc * d + k) -= b(rr, k);
        }
      }
  }
  Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeThinV);
  Vec sv = svd.singularValues();
  if (sv(d * d - 1) > 1e-8 * sv(0))
    throw std::runtime_error("contragredient_intertwiner: no intertwiner");
  if (d * d >= 2 && sv(d * d - 2) < 1e-8 * std::max(sv(0), 1.0))
    throw std::runtime_error("contragredient_intertwiner: not unique");
  Vec mv = svd.matrixV().col(d * d - 1);
  Mat m(d, d);
  for (int cc = 0; cc < d; ++cc)
    for (int rr = 0; rr < d; ++rr) m(rr, cc) = mv(cc * d + rr);
  // Normalize: column at the conjugate highest weight vector equals eta.
  Vec eta = vbar.eta_low();
  Vec col = m.col(v.highest());
  double s = eta.dot(col) / col.squaredNorm();
  return s * m;
}

}  // namespace qb
