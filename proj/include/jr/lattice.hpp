#pragma once

#include "jr/matrix.hpp"

#include <vector>

namespace jr {

struct SingularBasis : std::domain_error {
    using std::domain_error::domain_error;
};
struct NotNested : std::domain_error {
    using std::domain_error::domain_error;
};
struct DegenerateForm : std::domain_error {
    using std::domain_error::domain_error;
};

bool in_Zp(const Rat& x, long p);           // v_p(x) >= 0
bool in_OF(const QuadElem& x, long p);      // both coordinates in Z_(p)

// Canonical representative of x + p^k Z_(p) with p-power denominator.
Rat reduce_mod_p_power(const Rat& x, long p, long k);

/// Full-rank Z_(p)-lattice in Q^m, held by its canonical column Hermite
/// normal form: upper triangular, diagonal p^{k_i} (k_i in Z), entries
/// above the diagonal reduced mod the diagonal of their row.
class Lattice {
  public:
    Lattice() : p_(0) {}
    // Span of the columns of gens (m x n, n >= m, full rank m).
    Lattice(long p, const QMat& gens);

    static Lattice standard(long p, int m);

    long p() const { return p_; }
    int dim() const { return basis_.rows(); }
    const QMat& basis() const { return basis_; }

    Lattice scaled(const Rat& c) const;
    bool contains(const std::vector<Rat>& v) const;
    bool contains(const Lattice& other) const;   // other subset of this
    friend bool operator==(const Lattice& a, const Lattice& b) {
        return a.p_ == b.p_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Lattice& a, const Lattice& b) { return !(a == b); }
    bool operator<(const Lattice& o) const;      // deterministic order

    // Sum of lattices (join of spans).
    friend Lattice operator+(const Lattice& a, const Lattice& b);

  private:
    long p_;
    QMat basis_;
};

/// Column HNF over Z_(p) of the span of the columns of gens; throws
/// SingularBasis when the columns do not have full row rank.
QMat hnf_Zp(const QMat& gens, long p);

/// Signed index d with [L0 : L] = q^d; positive when L is smaller.
long lattice_index(const Lattice& L, const Lattice& L0);

/// Canonical form (idempotent by construction; exposed for the API).
Lattice canonicalize(const Lattice& L);

/// {x : C x integral at p}; C must have full column rank.
Lattice preimage_lattice(const QMat& C, long p);

/// Dual {x : <x, l> in Z_(p) for all l in L} under a symmetric rational
/// pairing <x,y> = x^T M y.  Throws DegenerateForm when det M = 0.
Lattice dual_lattice_bilinear(const Lattice& L, const QMat& M);

/// Sublattice {x in L : x_i = 0 for i >= k}, expressed in Q^k.
Lattice coordinate_section(const Lattice& L, int k);

/// Smith normal form over Z_(p): R = U * diag(p^{e_i}) * V with U, V in
/// GL(Z_(p)); exponents returned ascending.  R must be invertible over Q
/// with entries in Z_(p).
struct SnfResult {
    QMat U, V;
    std::vector<long> exponents;
};
SnfResult snf_Zp(const QMat& R, long p);

/// All lattices L with M1 subset L subset M2, canonical, sorted.
/// Throws NotNested unless M1 subset M2.
std::vector<Lattice> lattices_between(const Lattice& M1, const Lattice& M2);

// ---------------------------------------------------------------------
// O_F-lattices in F^m as rank-2m Z_(p)-lattices, coordinates
// (x_0..x_{m-1}, y_0..y_{m-1}) for the vector x + sqrt(d) y.

std::vector<Rat> quad_vec_coords(const std::vector<QuadElem>& v);
std::vector<QuadElem> quad_vec_from_coords(long d, const std::vector<Rat>& c);

// 2m x 2m rational matrix of multiplication by sqrt(d) resp. by an
// F-matrix g on the coordinates above.
QMat sqrt_d_action(long d, int m);
QMat quad_matrix_action(const FMat& g);

class QuadLattice {
  public:
    QuadLattice() = default;
    // O_F-span of the given F-vectors (each contributes v and sqrt(d) v).
    QuadLattice(const LocalFieldCtx& ctx, int m, const std::vector<std::vector<QuadElem>>& gens);
    QuadLattice(long p, long d, int m, Lattice raw);

    static QuadLattice standard(const LocalFieldCtx& ctx, int m);

    int rank() const { return m_; }                 // rank over O_F
    const Lattice& raw() const { return raw_; }     // rank-2m Z_(p)-lattice
    long p() const { return p_; }
    long d() const { return d_; }

    bool sqrt_d_stable() const;
    bool stable_under(const FMat& g) const;
    bool contains(const std::vector<QuadElem>& v) const;
    bool contains(const QuadLattice& other) const;

    /// Dual under the hermitian form with Gram J: <x,y> = conj(y)^T J x.
    QuadLattice dual(const FMat& J) const;
    bool self_dual(const FMat& J) const;

    friend bool operator==(const QuadLattice& a, const QuadLattice& b) {
        return a.raw_ == b.raw_;
    }

  private:
    long p_ = 0, d_ = 0;
    int m_ = 0;
    Lattice raw_;
};

/// Signed index of rank-2m lattices (same convention as lattice_index).
long quad_lattice_index(const QuadLattice& L, const QuadLattice& L0);

std::vector<QuadLattice> quad_lattices_between(const QuadLattice& M1, const QuadLattice& M2);

// O_F is itself a discrete valuation ring (unramified), so O_F-lattices in
// F^m carry canonical m x m Hermite forms over O_F; enumeration through
// them is far smaller than through the rank-2m picture.

/// Column HNF over O_F of the span of the columns (diagonal p^{k_i},
/// entries above the diagonal reduced mod the diagonal).
FMat hnf_OF(const FMat& gens, const LocalFieldCtx& ctx);

/// Smith normal form over O_F: R = U diag(p^{e_i}) V, exponents ascending.
struct SnfOFResult {
    FMat U;
    std::vector<long> exponents;
};
SnfOFResult snf_OF(const FMat& R, const LocalFieldCtx& ctx);

/// All O_F-lattices between two nested O_F-lattices given by m x m bases
/// over F, returned as QuadLattice values.
std::vector<QuadLattice> of_lattices_between(const FMat& B1, const FMat& B2,
                                             const LocalFieldCtx& ctx);

}  // namespace jr
