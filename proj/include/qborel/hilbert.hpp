#pragma once

/// Concrete graded Hilbert-space model of the localized amplified algebra:
/// the rank-one Fock representation of the matrix-coefficient algebra, its
/// assembly along a reduced longest word, and windowed matrix realizations
/// of localized elements with truncation-aware masking.

#include <qborel/galois.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace qb {

/// Fock-space representation of the rank-one matrix-coefficient algebra at
/// deformation parameter qp: the off-corner coefficient acts diagonally as
/// q^n and the corner coefficient as the weighted shift sqrt(1-q^{2n}).
class FockTheta {
 public:
  FockTheta(double qp, int nf) : qp_(qp), nf_(nf) {
    ctx_ = std::make_unique<UqContext>("A1");
    pc_ = std::make_unique<PolContext>(ctx_.get(), qp);
    int h = pc_->rep({1}).highest();
    int o = 1 - h;
    gen_.assign(4, Mat::Zero(nf, nf));
    Mat raise = Mat::Zero(nf, nf);
    for (int n = 1; n < nf; ++n)
      raise(n, n - 1) = std::sqrt(1.0 - std::pow(qp, 2 * n));
    Mat dia = Mat::Zero(nf, nf);
    for (int n = 0; n < nf; ++n) dia(n, n) = std::pow(qp, n);
    gen_[2 * h + h] = raise;
    gen_[2 * h + o] = dia;
    // The other two generators follow from the star structure: read the
    // scalars t_hh^* = s00 t_oo and t_ho^* = s01 t_oh off the exact star.
    double s00 = star_scalar(h, h, o, o);
    double s01 = star_scalar(h, o, o, h);
    gen_[2 * o + o] = (1.0 / s00) * raise.transpose();
    gen_[2 * o + h] = (1.0 / s01) * dia.transpose();
  }

  PolContext* pc() { return pc_.get(); }
  const Mat& gen(int i, int j) const { return gen_[2 * i + j]; }

  /// Operator of a matrix-coefficient element (over this rank-one context).
  Mat theta(const PolEl& x) {
    Mat out = Mat::Zero(nf_, nf_);
    for (const auto& [w, c] : x.blocks()) {
      int nn = w[0];
      if (nn == 0) {
        out += c(0, 0) * Mat::Identity(nf_, nf_);
        continue;
      }
      const Mat& t = chain(nn);         // dim 2^N x d_N embedding
      Mat ch = t * c * t.transpose();   // coefficients over the N-fold tensor
      const std::vector<Mat>& wn = word_ops(nn);
      for (int a = 0; a < ch.rows(); ++a)
        for (int b = 0; b < ch.cols(); ++b)
          if (ch(a, b) != 0.0) out += ch(a, b) * wn[a * ch.cols() + b];
    }
    return out;
  }

 private:
  double star_scalar(int i, int j, int ti, int tj) {
    PolEl s = PolEl::matrix_unit(pc_.get(), {1}, i, j).star();
    const Mat& c = s.blocks().at({1});
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if ((a != ti || b != tj) && std::abs(c(a, b)) > 1e-12)
          throw std::logic_error("rank-one star is not a scaled unit");
    return c(ti, tj);
  }

  /// Isometric embedding of the spin-N space into the N-fold tensor power of
  /// the fundamental, built by composing two-factor decompositions.
  const Mat& chain(int nn) {
    auto it = chain_.find(nn);
    if (it != chain_.end()) return it->second;
    Mat t;
    if (nn == 1) {
      t = Mat::Identity(2, 2);
    } else {
      const Mat& prev = chain(nn - 1);
      Mat emb;
      for (const auto& s : pc_->cg({nn - 1}, {1}))
        if (s.mu == Weight{nn}) emb = s.isom;
      if (emb.size() == 0)
        throw std::logic_error("missing top two-factor component");
      t = kron(prev, Mat::Identity(2, 2)) * emb;
    }
    return chain_.emplace(nn, std::move(t)).first->second;
  }

  /// Ordered generator products over all index words of length N.
  const std::vector<Mat>& word_ops(int nn) {
    auto it = words_.find(nn);
    if (it != words_.end()) return it->second;
    int dim = 1 << nn;
    std::vector<Mat> out(static_cast<size_t>(dim) * dim);
    if (nn == 1) {
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out[a * 2 + b] = gen(a, b);
    } else {
      const std::vector<Mat>& prev = word_ops(nn - 1);
      int pd = dim / 2;
      for (int a1 = 0; a1 < 2; ++a1)
        for (int b1 = 0; b1 < 2; ++b1)
          for (int a = 0; a < pd; ++a)
            for (int b = 0; b < pd; ++b)
              out[(a1 * pd + a) * dim + (b1 * pd + b)] =
                  gen(a1, b1) * prev[a * pd + b];
    }
    return words_.emplace(nn, std::move(out)).first->second;
  }

  double qp_;
  int nf_;
  std::unique_ptr<UqContext> ctx_;
  std::unique_ptr<PolContext> pc_;
  std::vector<Mat> gen_;
  std::map<int, Mat> chain_;
  std::map<int, std::vector<Mat>> words_;
};

/// The big-cell model: the matrix-coefficient algebra acts on the tensor
/// power of Fock spaces along a reduced longest word; localized and amplified
/// elements act on lattice-graded columns of that space.
class BigCellModel {
 public:
  BigCellModel(PolCtxPtr pc, int nf)
      : pc_(pc),
        nf_(nf),
        word_(pc->rd().w0_word()),
        betas_(pc->rd().beta_sequence()) {
    m_ = static_cast<int>(word_.size());
    dim_ = 1;
    for (int i = 0; i < m_; ++i) dim_ *= nf_;
    for (int r : word_)
      if (!thetas_.count(r))
        thetas_[r] = std::make_unique<FockTheta>(
            std::pow(pc->q(), pc->rd().d(r)), nf_);
    // The shift unitaries u_w = b_w |b_w|^{-1} carry a sign character on the
    // weight lattice, read off from the big-cell coefficient images.
    int n = pc_->rd().rank();
    usign_.assign(n, 1);
    for (int r = 0; r < n; ++r) {
      Mat tb = theta_w0(PolEl::b_el(pc_, pc_->rd().fundamental(r)));
      if (tb(0, 0) < 0.0) usign_[r] = -1;
    }
  }

  /// Sign of the shift unitary u_a.
  double usign(const Weight& a) const {
    int s = 1;
    for (size_t r = 0; r < a.size(); ++r)
      if (usign_[r] < 0 && (a[r] % 2 != 0)) s = -s;
    return static_cast<double>(s);
  }

  int fock_dim() const { return dim_; }
  int legs() const { return m_; }
  const std::vector<int>& word() const { return word_; }

  /// Image of a matrix-coefficient element on the full Fock tensor power,
  /// assembled leg by leg through the iterated coproduct.
  Mat theta_w0(const PolEl& x) {
    Mat out = Mat::Zero(dim_, dim_);
    Mat acc = Mat::Identity(1, 1);
    add_legs(x, 0, acc, out);
    return out;
  }

  /// Per-leg diagonal of the invariant-integral density |b|_rho^2:
  /// diag(q^{2 n (rho, beta_pos)}).
  const Mat& leg_weight(int pos) {
    auto it = legw_.find(pos);
    if (it != legw_.end()) return it->second;
    Mat w = Mat::Zero(nf_, nf_);
    Rational e = 2 * pc_->rd().pairing(pc_->rd().rho(), betas_[pos]);
    for (int n = 0; n < nf_; ++n) w(n, n) = pc_->qpow(n * e);
    return legw_.emplace(pos, std::move(w)).first->second;
  }

  /// Normalization constant: the product over positive roots of
  /// (1 - q^{2(rho, alpha)}), the value of the invariant integral at 1.
  double psi_one() const {
    double p = 1.0;
    for (const Weight& a : pc_->rd().positive_roots())
      p *= 1.0 - pc_->qpow(2 * pc_->rd().pairing(pc_->rd().rho(), a));
    return p;
  }

  /// Invariant integral via the big-cell trace formula: the torus average
  /// keeps only the left-weight-zero part, which is traced against the
  /// density |b|_rho^2.  Self-normalized so that the value at 1 is exactly
  /// the product over positive roots of (1 - q^{2(rho, alpha)}) at any
  /// truncation level.
  double haar_psi(const PolEl& x) {
    double tr = 0.0;
    for (const auto& bc : x.bicomponents())
      if (wis_zero(bc.lwt)) tr += trace_legs(bc.part, 0);
    double trw = 1.0;
    for (int i = 0; i < m_; ++i) trw *= leg_weight(i).trace();
    return psi_one() * tr / trw;
  }

  /// Largest singular value of theta_w0(x) computed blockwise: the Fock
  /// tensor basis is graded by the lattice weight sum_i n_i beta_i, and for a
  /// bihomogeneous x the Gram matrix of the image splits along the column
  /// grading, so the norm is the maximum over per-weight column groups.
  /// Avoids materializing the dense operator at large truncation.
  double op_norm(const PolEl& x) {
    std::vector<std::vector<Mat>> chains;
    build_chains(x, 0, {}, chains);
    // Group columns by lattice weight.
    std::map<Weight, std::vector<int>> groups;
    int rank = pc_->rd().rank();
    for (int t = 0; t < dim_; ++t) {
      Weight wt(rank, 0);
      int rem = t;
      for (int i = m_ - 1; i >= 0; --i) {
        int ni = rem % nf_;
        rem /= nf_;
        for (int r = 0; r < rank; ++r) wt[r] += ni * betas_[i][r];
      }
      groups[wt].push_back(t);
    }
    double best = 0.0;
    std::vector<int> idx(m_);
    for (const auto& [wt, cols] : groups) {
      Mat blk = Mat::Zero(dim_, static_cast<int>(cols.size()));
      for (size_t cpos = 0; cpos < cols.size(); ++cpos) {
        int rem = cols[cpos];
        for (int i = m_ - 1; i >= 0; --i) {
          idx[i] = rem % nf_;
          rem /= nf_;
        }
        for (const auto& chain : chains) {
          Vec col = chain[0].col(idx[0]);
          bool zero = col.isZero(0.0);
          for (int i = 1; i < m_ && !zero; ++i) {
            Vec leg = chain[i].col(idx[i]);
            if (leg.isZero(0.0)) {
              zero = true;
              break;
            }
            Vec next(col.size() * leg.size());
            for (int a = 0; a < col.size(); ++a)
              next.segment(a * leg.size(), leg.size()) = col(a) * leg;
            col = std::move(next);
          }
          if (!zero) blk.col(cpos) += col;
        }
      }
      if (blk.isZero(0.0)) continue;
      Eigen::JacobiSVD<Mat> svd(blk);
      best = std::max(best, svd.singularValues()(0));
    }
    return best;
  }

  /// Lattice-graded vector in the model: one Fock-tensor vector per support
  /// point of the weight lattice.
  using ModelVec = std::map<Weight, Vec>;

  /// Apply a localized amplified element to a lattice-graded vector.
  ModelVec apply(const GalEl& g, const ModelVec& v) {
    ModelVec out;
    for (const auto& [chi, vec] : v)
      for (const auto& [oc, op] : column(g, chi)) {
        Vec w = op * vec;
        auto it = out.find(oc);
        if (it == out.end())
          out[oc] = std::move(w);
        else
          it->second += w;
      }
    return out;
  }

  /// All column maps of g with source point ranging over the lattice box.
  std::map<Weight, std::map<Weight, Mat>> columns_box(const GalEl& g,
                                                      int radius) {
    std::map<Weight, std::map<Weight, Mat>> out;
    for (const Weight& chi : lattice_box(radius)) out[chi] = column(g, chi);
    return out;
  }

  /// Diagonal of the formal modulus |b|_c: q^{sum_i n_i (c, beta_i)}.
  Mat babs_diag(const Weight& c) {
    Mat out = Mat::Zero(dim_, dim_);
    std::vector<int> idx(m_, 0);
    for (int t = 0; t < dim_; ++t) {
      Rational e = 0;
      int rem = t;
      for (int i = m_ - 1; i >= 0; --i) {
        int ni = rem % nf_;
        rem /= nf_;
        e += ni * pc_->rd().pairing(c, betas_[i]);
      }
      out(t, t) = pc_->qpow(e);
    }
    return out;
  }

  /// Action of a localized amplified element on the column at lattice point
  /// chi: resulting per-output-point Fock operators.
  std::map<Weight, Mat> column(const GalEl& g, const Weight& chi) {
    std::map<Weight, Mat> out;
    for (const auto& [atom, loc] : g.terms()) {
      double fval;
      if (atom.kind == FAtom::Delta)
        fval = (chi == wneg(atom.w)) ? 1.0 : 0.0;
      else
        fval = pc_->qpow(-pc_->rd().pairing(atom.w, chi));
      if (fval == 0.0) continue;
      for (const auto& [key, x] : loc.terms()) {
        Mat dc = babs_diag(key.second);
        for (const auto& bc : x.bicomponents()) {
          Weight oc = wadd(chi, wadd(key.first, bc.lwt));
          Mat op = (usign(key.first) * fval) * (dc * theta_w0(bc.part));
          auto it = out.find(oc);
          if (it == out.end())
            out[oc] = std::move(op);
          else
            it->second += op;
        }
      }
    }
    return out;
  }

  /// Truncation mask: keep states whose every Fock index is below nf-margin.
  Mat mask(int margin) const {
    Mat out = Mat::Zero(dim_, dim_);
    for (int t = 0; t < dim_; ++t) {
      int rem = t;
      bool ok = true;
      for (int i = 0; i < m_; ++i) {
        if (rem % nf_ >= nf_ - margin) ok = false;
        rem /= nf_;
      }
      if (ok) out(t, t) = 1.0;
    }
    return out;
  }

  /// Masked residual of a - b over the lattice box |chi_r| <= radius:
  /// Frobenius norm over interior columns and rows of every output block.
  double residual(const GalEl& a, const GalEl& b, int radius, int margin) {
    Mat mk = mask(margin);
    double s2 = 0.0;
    std::vector<Weight> box = lattice_box(radius);
    for (const Weight& chi : box) {
      std::map<Weight, Mat> ca = column(a, chi);
      for (auto& [oc, op] : column(b, chi)) {
        auto it = ca.find(oc);
        if (it == ca.end())
          ca[oc] = -op;
        else
          it->second -= op;
      }
      for (const auto& [oc, op] : ca) s2 += (mk * op * mk).squaredNorm();
    }
    return std::sqrt(s2);
  }

  std::vector<Weight> lattice_box(int radius) const {
    int n = pc_->rd().rank();
    std::vector<Weight> out;
    Weight cur(n, -radius);
    while (true) {
      out.push_back(cur);
      int i = 0;
      for (; i < n; ++i) {
        if (cur[i] < radius) {
          ++cur[i];
          break;
        }
        cur[i] = -radius;
      }
      if (i == n) break;
    }
    return out;
  }

  PolCtxPtr pc() const { return pc_; }

 private:
  /// Expand the iterated coproduct into per-leg operator chains.
  void build_chains(const PolEl& x, int pos, std::vector<Mat> prefix,
                    std::vector<std::vector<Mat>>& out) {
    if (pos == m_ - 1) {
      Mat last = leg_theta(pos, x);
      if (!last.isZero(0.0)) {
        prefix.push_back(std::move(last));
        out.push_back(std::move(prefix));
      }
      return;
    }
    for (const auto& [l, r] : x.coproduct()) {
      Mat head = leg_theta(pos, l);
      if (head.isZero(0.0)) continue;
      std::vector<Mat> next = prefix;
      next.push_back(std::move(head));
      build_chains(r, pos + 1, std::move(next), out);
    }
  }

  /// Leg-factorized trace against the density: the density is a tensor
  /// product of per-leg diagonals, so the trace splits along the iterated
  /// coproduct into products of per-leg traces.
  double trace_legs(const PolEl& x, int pos) {
    if (pos == m_ - 1) return (leg_theta(pos, x) * leg_weight(pos)).trace();
    double s = 0.0;
    for (const auto& [l, r] : x.coproduct()) {
      double t = (leg_theta(pos, l) * leg_weight(pos)).trace();
      if (t != 0.0) s += t * trace_legs(r, pos + 1);
    }
    return s;
  }

  void add_legs(const PolEl& x, int pos, const Mat& acc, Mat& out) {
    if (pos == m_ - 1) {
      Mat last = leg_theta(pos, x);
      out += kron(acc, last);
      return;
    }
    for (const auto& [l, r] : x.coproduct()) {
      Mat next = kron(acc, leg_theta(pos, l));
      add_legs(r, pos + 1, next, out);
    }
  }

  /// Restrict a matrix-coefficient element to the rank-one subalgebra at the
  /// given leg and represent it on that leg's Fock space.
  Mat leg_theta(int pos, const PolEl& x) {
    int r = word_[pos];
    FockTheta& th = *thetas_.at(r);
    PolEl res(th.pc());
    for (const auto& [w, c] : x.blocks())
      for (const auto& blk : sl2_blocks(r, w)) {
        Mat cn = blk.iso.transpose() * c * blk.iso;
        for (int i = 0; i < cn.rows(); ++i)
          for (int j = 0; j < cn.cols(); ++j)
            if (cn(i, j) != 0.0)
              res += cn(i, j) *
                     PolEl::matrix_unit(th.pc(), {blk.spin}, i, j);
      }
    return th.theta(res);
  }

  struct Sl2Block {
    int spin;
    Mat iso;  // dim(V_w) x (spin+1), isometric chain from a highest vector
  };

  const std::vector<Sl2Block>& sl2_blocks(int r, const Weight& w) {
    auto key = std::make_pair(r, w);
    auto it = blocks_.find(key);
    if (it != blocks_.end()) return it->second;
    const Irrep& v = pc_->rep(w);
    int d = v.dim();
    Mat er = v.act(El::E(pc_->uq(), Pres::Uqk, r));
    Mat fr = v.act(El::F(pc_->uq(), Pres::Uqk, r));
    FockTheta& th = *thetas_.at(r);
    // Group basis indices by the r-th coweight pairing.
    std::map<int, std::vector<int>> bym;
    for (int i = 0; i < d; ++i) bym[v.weight(i)[r]].push_back(i);
    std::vector<Sl2Block> out;
    int total = 0;
    for (const auto& [mval, idx] : bym) {
      if (mval < 0) continue;
      // Highest vectors: kernel of E_r restricted to this slice.
      auto up = bym.find(mval + 2);
      int rows = up == bym.end() ? 0 : static_cast<int>(up->second.size());
      Mat sub = Mat::Zero(std::max(rows, 1), idx.size());
      if (rows > 0)
        for (int a = 0; a < rows; ++a)
          for (size_t b = 0; b < idx.size(); ++b)
            sub(a, b) = er(up->second[a], idx[b]);
      Eigen::JacobiSVD<Mat> svd(sub, Eigen::ComputeFullV);
      int nk = 0;
      for (int k = 0; k < sub.cols(); ++k) {
        double sv = k < svd.singularValues().size()
                        ? svd.singularValues()(k)
                        : 0.0;
        if (sv < 1e-8) ++nk;
      }
      const Mat& vv = svd.matrixV();
      for (int k = static_cast<int>(sub.cols()) - nk; k < sub.cols(); ++k) {
        // Chain down, matching the rank-one lowering normalization and the
        // rank-one representation's own basis indexing.
        const Irrep& vm = th.pc()->rep({mval});
        const Mat& fn = vm.Fm(0);
        Mat iso = Mat::Zero(d, mval + 1);
        int cur = vm.highest();
        for (size_t b = 0; b < idx.size(); ++b) iso(idx[b], cur) = vv(b, k);
        for (int step = 0; step < mval; ++step) {
          int nxt = -1;
          for (int j = 0; j < mval + 1; ++j)
            if (std::abs(fn(j, cur)) > 1e-12) nxt = j;
          Vec img = fr * iso.col(cur);
          iso.col(nxt) = img / fn(nxt, cur);
          cur = nxt;
        }
        out.push_back(Sl2Block{mval, std::move(iso)});
        total += mval + 1;
      }
    }
    if (total != d)
      throw std::logic_error("rank-one decomposition dimension mismatch");
    return blocks_.emplace(key, std::move(out)).first->second;
  }

  PolCtxPtr pc_;
  int nf_, m_, dim_;
  std::vector<int> usign_;
  std::vector<int> word_;
  std::vector<Weight> betas_;
  std::map<int, std::unique_ptr<FockTheta>> thetas_;
  std::map<int, Mat> legw_;
  std::map<std::pair<int, Weight>, std::vector<Sl2Block>> blocks_;
};

}  // namespace qb
