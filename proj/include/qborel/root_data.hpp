#pragma once

/// Cartan matrices, weight-lattice arithmetic, positive roots and Weyl-group
/// combinatorics for the simple types used by the workbench (A1, A2, A3, B2,
/// G2).  Weights are integer vectors in fundamental-weight coordinates; all
/// inner products are exact rationals with the convention that short roots
/// have squared length 2.

#include <qborel/qfield.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qb {

/// Weight in fundamental-weight coordinates.
using Weight = std::vector<int>;

inline Weight wzero(int rank) { return Weight(rank, 0); }
inline Weight wadd(const Weight& a, const Weight& b) {
  Weight r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}
inline Weight wsub(const Weight& a, const Weight& b) {
  Weight r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}
inline Weight wneg(const Weight& a) {
  Weight r = a;
  for (auto& x : r) x = -x;
  return r;
}
inline Weight wscale(int c, const Weight& a) {
  Weight r = a;
  for (auto& x : r) x *= c;
  return r;
}
inline bool wis_zero(const Weight& a) {
  return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
}

class RootDatum {
 public:
  /// Known labels: A1, A2, A3, B2, G2.
  static RootDatum create(const std::string& label) {
    if (label == "A1") return RootDatum(label, {{2}}, {1});
    if (label == "A2") return RootDatum(label, {{2, -1}, {-1, 2}}, {1, 1});
    if (label == "A3")
      return RootDatum(label, {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}},
                       {1, 1, 1});
    if (label == "B2") return RootDatum(label, {{2, -1}, {-2, 2}}, {2, 1});
    if (label == "G2") return RootDatum(label, {{2, -1}, {-3, 2}}, {3, 1});
    throw std::invalid_argument("unknown root datum label: " + label);
  }

  const std::string& label() const { return label_; }
  int rank() const { return rank_; }
  /// Cartan matrix entry A[r][s] = <alpha_r^vee, alpha_s>.
  int cartan(int r, int s) const { return a_[r][s]; }
  /// Symmetrizer d_r = (alpha_r, alpha_r)/2.
  int d(int r) const { return d_[r]; }

  /// Simple root alpha_r in fundamental-weight coordinates.
  Weight alpha(int r) const {
    Weight w(rank_);
    for (int s = 0; s < rank_; ++s) w[s] = a_[s][r];
    return w;
  }
  Weight fundamental(int r) const {
    Weight w(rank_, 0);
    w[r] = 1;
    return w;
  }
  Weight rho() const { return Weight(rank_, 1); }

  /// Invariant bilinear form (lambda, mu), exact.
  Rational pairing(const Weight& lam, const Weight& mu) const {
    // (lambda, mu) = sum_r lambda_r d_r (A^{-1} mu)_r.
    Rational acc = 0;
    for (int r = 0; r < rank_; ++r) {
      Rational c = 0;
      for (int s = 0; s < rank_; ++s) c += ainv_[r][s] * mu[s];
      acc += Rational(lam[r]) * d_[r] * c;
    }
    return acc;
  }
  double pairing_d(const Weight& lam, const Weight& mu) const {
    return static_cast<double>(pairing(lam, mu));
  }
  /// (lambda, alpha_r), always an integer multiple of... exact integer check.
  Rational pair_alpha(const Weight& lam, int r) const {
    return Rational(lam[r]) * d_[r];  // (ϖ_s, alpha_r) = δ_sr d_r.
  }

  /// Coordinates of lambda in the simple-root basis: lambda = sum c_r alpha_r.
  std::vector<Rational> root_coords(const Weight& lam) const {
    std::vector<Rational> c(rank_);
    for (int r = 0; r < rank_; ++r)
      for (int s = 0; s < rank_; ++s) c[r] += ainv_[r][s] * lam[s];
    return c;
  }

  /// Simple reflection s_r(lambda) = lambda - <alpha_r^vee, lambda> alpha_r.
  Weight reflect(int r, const Weight& lam) const {
    Weight res = lam;
    int c = lam[r];
    for (int s = 0; s < rank_; ++s) res[s] -= c * a_[s][r];
    return res;
  }

  /// Apply a word of simple reflections left-to-right:
  /// word = (r1,...,rk) acts as s_{r1} s_{r2} ... s_{rk} (lambda).
  Weight act(const std::vector<int>& word, const Weight& lam) const {
    Weight v = lam;
    for (auto it = word.rbegin(); it != word.rend(); ++it)
      v = reflect(*it, v);
    return v;
  }

  const std::vector<Weight>& positive_roots() const { return pos_roots_; }
  const std::vector<int>& w0_word() const { return w0_word_; }
  int longest_length() const { return static_cast<int>(w0_word_.size()); }

  /// w0(lambda).
  Weight w0_act(const Weight& lam) const { return act(w0_word_, lam); }

  /// Root sequence beta_i = s_{r1}...s_{r_{i-1}}(alpha_{r_i}) of a reduced
  /// word for w0; enumerates each positive root once.
  std::vector<Weight> beta_sequence(const std::vector<int>& word) const {
    std::vector<Weight> betas;
    for (size_t i = 0; i < word.size(); ++i) {
      std::vector<int> prefix(word.begin(), word.begin() + i);
      betas.push_back(act(prefix, alpha(word[i])));
    }
    return betas;
  }
  std::vector<Weight> beta_sequence() const { return beta_sequence(w0_word_); }

  /// All reduced words for w0 (small ranks only).
  std::vector<std::vector<int>> all_w0_words() const {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    enumerate_words(wneg(rho()), cur, out);
    return out;
  }

 private:
  RootDatum(std::string label, std::vector<std::vector<int>> a,
            std::vector<int> d)
      : label_(std::move(label)), a_(std::move(a)), d_(std::move(d)) {
    rank_ = static_cast<int>(a_.size());
    invert_cartan();
    compute_positive_roots();
    compute_w0();
  }

  void invert_cartan() {
    int n = rank_;
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n, 0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m[i][j] = a_[i][j];
      m[i][n + i] = 1;
    }
    for (int col = 0; col < n; ++col) {
      int piv = col;
      while (m[piv][col] == 0) ++piv;
      std::swap(m[piv], m[col]);
      Rational p = m[col][col];
      for (auto& x : m[col]) x /= p;
      for (int row = 0; row < n; ++row) {
        if (row == col || m[row][col] == 0) continue;
        Rational f = m[row][col];
        for (int j = 0; j < 2 * n; ++j) m[row][j] -= f * m[col][j];
      }
    }
    ainv_.assign(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ainv_[i][j] = m[i][n + j];
  }

  void compute_positive_roots() {
    std::set<Weight> seen;
    std::vector<Weight> queue;
    for (int r = 0; r < rank_; ++r) {
      seen.insert(alpha(r));
      queue.push_back(alpha(r));
    }
    while (!queue.empty()) {
      Weight w = queue.back();
      queue.pop_back();
      for (int r = 0; r < rank_; ++r) {
        Weight v = reflect(r, w);
        if (is_negative(v)) continue;
        if (seen.insert(v).second) queue.push_back(v);
      }
    }
    pos_roots_.assign(seen.begin(), seen.end());
  }

  bool is_negative(const Weight& root) const {
    // A root is negative iff its simple-root coordinates are all <= 0;
    // equivalently (root, rho) < 0 since roots are never zero.
    return pairing(root, rho()) < 0;
  }

  void compute_w0() {
    Weight v = wneg(rho());
    Weight target = rho();
    while (v != target) {
      int r = 0;
      while (v[r] >= 0) ++r;
      v = reflect(r, v);
      w0_word_.push_back(r);
    }
    if (static_cast<int>(w0_word_.size()) !=
        static_cast<int>(pos_roots_.size()))
      throw std::logic_error("longest word length != #positive roots");
  }

  void enumerate_words(const Weight& v, std::vector<int>& cur,
                       std::vector<std::vector<int>>& out) const {
    // Build w0 = s_{r1}...s_{rk} backwards: maintain v = s_{r_j}...s_{r1}(-rho)
    // style search as in compute_w0, branching over all admissible r.
    if (cur.size() == w0_word_.size()) {
      // Reverse construction mirrors compute_w0: replay to check.
      out.push_back(cur);
      return;
    }
    for (int r = 0; r < rank_; ++r) {
      if (v[r] >= 0) continue;
      Weight w = reflect(r, v);
      cur.push_back(r);
      enumerate_words(w, cur, out);
      cur.pop_back();
    }
  }

  std::string label_;
  std::vector<std::vector<int>> a_;
  std::vector<int> d_;
  int rank_ = 0;
  std::vector<std::vector<Rational>> ainv_;
  std::vector<Weight> pos_roots_;
  std::vector<int> w0_word_;
};

}  // namespace qb
