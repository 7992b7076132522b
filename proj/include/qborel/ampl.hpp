#pragma once

/// The amplified multiplier algebras: matrix-coefficient parts tensored with
/// functions on the weight lattice, in the two interchange-relation flavors,
/// with products, coproduct/coaction against finite covers, invariant
/// integrals and the translation actions of the doubled Borel quantum group.

#include <qborel/polq.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qb {

/// Function atom on the weight lattice: either a point mass at chi
/// (kind Delta) or the full-support character chi -> q^{(w,chi)} (kind Zchar).
/// Finitely supported functions are sums of Delta atoms; the closed-form tag
/// keeps products with the multipliers z_w exact.
struct FAtom {
  enum Kind { Delta = 0, Zchar = 1 };
  Kind kind;
  Weight w;
  bool operator<(const FAtom& o) const {
    if (kind != o.kind) return kind < o.kind;
    return w < o.w;
  }
  bool operator==(const FAtom& o) const {
    return kind == o.kind && w == o.w;
  }
};

enum class Flavor { Plus, Zero };

/// Element of an amplified algebra in normal order (Pol part) * (function):
/// canonical form as a map from function atoms to matrix-coefficient parts.
class AmpEl {
 public:
  AmpEl() : pc_(nullptr), fl_(Flavor::Plus) {}
  AmpEl(PolCtxPtr pc, Flavor fl) : pc_(pc), fl_(fl) {}

  static AmpEl term(PolCtxPtr pc, Flavor fl, const PolEl& x, const FAtom& a) {
    AmpEl r(pc, fl);
    if (!x.is_zero()) r.terms_[a] = x;
    return r;
  }
  static AmpEl delta(PolCtxPtr pc, Flavor fl, const PolEl& x,
                     const Weight& chi) {
    return term(pc, fl, x, FAtom{FAtom::Delta, chi});
  }
  /// The multiplier z_w (flavor 0 in the paper; allowed for both flavors).
  static AmpEl z_el(PolCtxPtr pc, Flavor fl, const Weight& w) {
    return term(pc, fl, PolEl::one(pc), FAtom{FAtom::Zchar, w});
  }
  static AmpEl unit_multiplier(PolCtxPtr pc, Flavor fl) {
    return z_el(pc, fl, wzero(pc->rd().rank()));
  }

  PolCtxPtr pc() const { return pc_; }
  Flavor flavor() const { return fl_; }
  const std::map<FAtom, PolEl>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool compact() const {
    for (const auto& [a, x] : terms_)
      if (a.kind != FAtom::Delta) return false;
    return true;
  }

  AmpEl& operator+=(const AmpEl& o) {
    if (!pc_) {
      pc_ = o.pc_;
      fl_ = o.fl_;
    }
    for (const auto& [a, x] : o.terms_) add(a, x);
    return *this;
  }
  AmpEl operator+(const AmpEl& o) const {
    AmpEl r = *this;
    r += o;
    return r;
  }
  AmpEl operator-(const AmpEl& o) const { return *this + (-1.0) * o; }
  friend AmpEl operator*(double s, const AmpEl& x) {
    AmpEl r = x;
    for (auto& [a, p] : r.terms_) p = s * p;
    r.prune();
    return r;
  }

  /// Interchange shift of a bihomogeneous Pol part: lwt - rwt for flavor +,
  /// lwt for flavor 0 (f x = x f_shift).
  Weight ishift(const Weight& lwt, const Weight& rwt) const {
    return fl_ == Flavor::Plus ? wsub(lwt, rwt) : lwt;
  }

  AmpEl operator*(const AmpEl& o) const {
    if (fl_ != o.fl_) throw std::invalid_argument("AmpEl: flavor mismatch");
    AmpEl out(pc_, fl_);
    for (const auto& [a1, x1] : terms_)
      for (const auto& [a2, x2] : o.terms_)
        for (const auto& bc : x2.bicomponents()) {
          Weight s = ishift(bc.lwt, bc.rwt);
          // a1 x2c = x2c (a1)_s; then (a1)_s * a2 pointwise.
          auto [sa, sc] = shifted(a1, s);
          auto prod = atom_product(sa, a2);
          if (!prod.second) continue;
          out.add(prod.first, (sc * prod.second.value()) * (x1 * bc.part));
        }
    out.prune();
    return out;
  }

  /// (x a)^* = x^* (a)_{shift(x^*)} with real function atoms.
  AmpEl star() const {
    AmpEl out(pc_, fl_);
    for (const auto& [a, x] : terms_) {
      PolEl xs = x.star();
      for (const auto& bc : xs.bicomponents()) {
        auto [sa, sc] = shifted(a, ishift(bc.lwt, bc.rwt));
        out.add(sa, sc * bc.part);
      }
    }
    out.prune();
    return out;
  }

  /// Pairing with the doubled-Borel presentation via the embedding
  /// E_r -> (E_r)_{alpha_r}, F_r -> (F_r)_0, K_w -> (K_w)_w, L_w -> (K_w)_{-w}:
  /// ((Y)_w, x f) = evaluate(x, Y) f(w).
  double pair_borel(const El& big) const {
    double acc = 0.0;
    for (const auto& [m, c] : big.terms()) {
      Weight aw = mono_aweight(m);
      El y = mono_k_image(m);
      double cv = pc_->uq()->to_double(c, pc_->q());
      for (const auto& [a, x] : terms_)
        acc += cv * x.evaluate(y) * at(a, aw);
    }
    return acc;
  }

  /// Right translation action x <| X = (X (x) id)Delta(x): per monomial
  /// (Y)_w the Pol part maps C -> pi(Y)^T C, the function shifts by -w.
  AmpEl act_right(const El& big) const {
    AmpEl out(pc_, fl_);
    for (const auto& [m, c] : big.terms()) {
      Weight aw = mono_aweight(m);
      El y = mono_k_image(m);
      double cv = pc_->uq()->to_double(c, pc_->q());
      for (const auto& [a, x] : terms_) {
        PolEl px(pc_);
        for (const auto& [w, cm] : x.blocks()) {
          Mat nc = pc_->rep(w).act(y).transpose() * cm;
          for (int i = 0; i < nc.rows(); ++i)
            px += PolEl::matrix_coeff(pc_, w, Vec::Unit(nc.rows(), i),
                                      nc.row(i).transpose());
        }
        auto [sa, sc] = shifted(a, wneg(aw));
        out.add(sa, (cv * sc) * px);
      }
    }
    out.prune();
    return out;
  }

  /// Left translation action X |> x = (id (x) X)Delta(x): C -> C pi(Y),
  /// function shifts by -w.
  AmpEl act_left(const El& big) const {
    AmpEl out(pc_, fl_);
    for (const auto& [m, c] : big.terms()) {
      Weight aw = mono_aweight(m);
      El y = mono_k_image(m);
      double cv = pc_->uq()->to_double(c, pc_->q());
      for (const auto& [a, x] : terms_) {
        PolEl px(pc_);
        for (const auto& [w, cm] : x.blocks()) {
          Mat nc = cm * pc_->rep(w).act(y).transpose();
          for (int i = 0; i < nc.rows(); ++i)
            px += PolEl::matrix_coeff(pc_, w, Vec::Unit(nc.rows(), i),
                                      nc.row(i).transpose());
        }
        auto [sa, sc] = shifted(a, wneg(aw));
        out.add(sa, (cv * sc) * px);
      }
    }
    out.prune();
    return out;
  }

  /// Counit eps(x f) = eps(x) f(0).
  double counit() const {
    double acc = 0.0;
    Weight z = wzero(pc_->rd().rank());
    for (const auto& [a, x] : terms_) acc += x.counit() * at(a, z);
    return acc;
  }

  /// Invariant integral psi(x f) = haar(x) sum_w f(w); compact support only.
  double integral() const {
    double acc = 0.0;
    for (const auto& [a, x] : terms_) {
      if (a.kind != FAtom::Delta)
        throw std::invalid_argument("AmpEl::integral: non-compact element");
      acc += x.haar();
    }
    return acc;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& [a, x] : terms_) s += x.norm() * x.norm();
    return std::sqrt(s);
  }

  void prune(double tol = 0.0) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second.prune(tol);
      if (it->second.is_zero())
        it = terms_.erase(it);
      else
        ++it;
    }
  }

  void add(const FAtom& a, const PolEl& x) {
    if (x.is_zero()) return;
    auto it = terms_.find(a);
    if (it == terms_.end())
      terms_[a] = x;
    else
      it->second += x;
  }

  /// Function value at a lattice point.
  double at(const FAtom& a, const Weight& chi) const {
    if (a.kind == FAtom::Delta) return a.w == chi ? 1.0 : 0.0;
    return pc_->qpow(pc_->rd().pairing(a.w, chi));
  }

  /// Shifted atom (f)_s with f_s(chi) = f(chi - s); returns (atom, scale).
  std::pair<FAtom, double> shifted(const FAtom& a, const Weight& s) const {
    if (a.kind == FAtom::Delta) return {FAtom{FAtom::Delta, wadd(a.w, s)}, 1.0};
    return {a, pc_->qpow(-pc_->rd().pairing(a.w, s))};
  }

  /// Pointwise product of two atoms; empty optional-style flag when zero.
  std::pair<FAtom, std::optional<double>> atom_product(const FAtom& a,
                                                       const FAtom& b) const {
    if (a.kind == FAtom::Delta && b.kind == FAtom::Delta) {
      if (a.w == b.w) return {a, 1.0};
      return {a, std::nullopt};
    }
    if (a.kind == FAtom::Delta)
      return {a, pc_->qpow(pc_->rd().pairing(b.w, a.w))};
    if (b.kind == FAtom::Delta)
      return {b, pc_->qpow(pc_->rd().pairing(a.w, b.w))};
    return {FAtom{FAtom::Zchar, wadd(a.w, b.w)}, 1.0};
  }

  /// Lattice weight of a doubled-Borel monomial under the embedding.
  Weight mono_aweight(const Mono& m) const {
    Weight w = wsub(m.c1, m.c2);
    for (int r : m.eword) w = wadd(w, pc_->rd().alpha(r));
    return w;
  }
  /// Compact-form image: K and L both map to K.
  El mono_k_image(const Mono& m) const {
    std::vector<Atom> atoms;
    for (int r : m.fword) atoms.push_back({Atom::F, r, {}});
    Weight c = wadd(m.c1, m.c2);
    if (!wis_zero(c)) atoms.push_back({Atom::CartA, 0, c});
    for (int r : m.eword) atoms.push_back({Atom::E, r, {}});
    return El::from_atoms(pc_->uq(), Pres::Uqk, std::move(atoms));
  }

 private:
  PolCtxPtr pc_;
  Flavor fl_;
  std::map<FAtom, PolEl> terms_;
};

/// Coproduct against a finite cover on the right leg:
/// Delta(a)(1 (x) cover) as a list of simple tensors.  For flavor Plus this
/// is the comultiplication; for flavor Zero it is the coaction into
/// (flavor +) (x) (flavor 0).
inline std::vector<std::pair<AmpEl, AmpEl>> coproduct_cover(
    const AmpEl& a, const AmpEl& cover) {
  PolCtxPtr pc = a.pc();
  Flavor right_fl = cover.flavor();
  std::vector<std::pair<AmpEl, AmpEl>> out;
  for (const auto& [fa, x] : a.terms()) {
    auto dx = x.coproduct();
    for (const auto& [fy, y] : cover.terms()) {
      if (fy.kind != FAtom::Delta)
        throw std::invalid_argument("coproduct_cover: cover not compact");
      for (const auto& ybc : y.bicomponents()) {
        Weight sy = cover.ishift(ybc.lwt, ybc.rwt);
        // Delta(f) between the Pol legs: moving past the cover's Pol part
        // shifts the right argument by sy; the cover's point mass at chi0
        // then freezes the right argument, leaving the left-leg function
        // f(. + chi0 - sy).
        Weight chi0 = fy.w;
        FAtom la;
        double lc = 1.0;
        if (fa.kind == FAtom::Delta) {
          la = FAtom{FAtom::Delta, wadd(fa.w, wsub(sy, chi0))};
        } else {
          la = fa;
          lc = pc->qpow(pc->rd().pairing(fa.w, wsub(chi0, sy)));
        }
        for (const auto& [l, r] : dx) {
          AmpEl left = AmpEl::term(pc, Flavor::Plus, lc * l, la);
          AmpEl right = AmpEl::term(pc, right_fl, r * ybc.part,
                                    FAtom{FAtom::Delta, chi0});
          if (left.is_zero() || right.is_zero()) continue;
          out.emplace_back(std::move(left), std::move(right));
        }
      }
    }
  }
  return out;
}

}  // namespace qb
