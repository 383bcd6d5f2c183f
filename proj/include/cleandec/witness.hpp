#pragma once

#include <string>
#include <vector>

#include "cleandec/matcore.hpp"

namespace cleandec {

/// Upper shift V_n: ones on the superdiagonal.
Matrix shift_matrix(Index n);

struct WitnessRow {
    Index n = 0;
    double measured = 0.0;   // ||(V_n - I)^{-1}||
    double reference = 0.0;  // sqrt(n)
    bool pass = false;
};

struct WitnessTable {
    std::vector<WitnessRow> rows;  // n ascending

    bool all_pass() const;
};

WitnessTable shift_inverse_lowerbound_table(Index n_max);

/// Commuting-projection search for T = [[1, 1], [0, 0]].
struct StarCounterexampleReport {
    Matrix t;
    /// Projections commuting with T from the closed-form solve.
    std::vector<Matrix> symbolic_projections;
    /// Rank-one projections v v^*, v = (cos a, e^{ib} sin a), on a grid of this step.
    double grid_step = 0.0;
    Index grid_points = 0;
    double grid_min_commutator = 0.0;
    /// Any rank-one commuting projection would put the grid minimum below this.
    double grid_threshold = 0.0;
    bool grid_finds_rank_one = false;
    double det_t = 0.0;              // |det(T - 0)|
    double det_t_minus_identity = 0.0;  // |det(T - I)|
    bool methods_agree = false;
    bool holds = false;
    std::string conclusion;
};

StarCounterexampleReport strong_star_clean_counterexample(double grid_step = 1e-2);

struct TruncatedShiftDemo {
    Index n = 0;
    double sigma_min = 0.0;  // sigma_min(S - P)
    double p_norm = 0.0;
};

/// n x n truncation of the unilateral shift S (ones below the diagonal) with
/// P = E + (I-E)(S + S^*)E, E the projection onto the even-numbered basis
/// vectors e_2, e_4, ... . No invertibility claim is made at finite n.
TruncatedShiftDemo truncated_shift_demo(Index n);

struct SmallFiniteRankResult {
    bool hypothesis = false;  // ||(T + A)F|| < c - ||A||
    Index rank_f = 0;
    Index rank_e = 0;
    bool holds = true;  // hypothesis implies rank F <= rank E
};

/// E is the spectral projection of |T| on [0, c]. Throws PreconditionError
/// when ||A|| >= c.
SmallFiniteRankResult small_finite_rank_check(const Matrix& t, const Matrix& a, double c,
                                              const OrthoProjection& f);

}  // namespace cleandec
