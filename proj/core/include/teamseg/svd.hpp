#pragma once

#include <array>
#include <span>
#include <vector>

#include "teamseg/color.hpp"
#include "teamseg/image.hpp"
#include "teamseg/matrix.hpp"

namespace teamseg {

// Thin SVD, A = U * diag(s) * V^T with k = min(rows, cols) columns.
// Columns of u and v are orthonormal, s is non-increasing and non-negative,
// and each u column has its largest-magnitude entry positive (first such
// entry on ties), which makes the factorization deterministic.
struct SvdFactorization {
    Matrix u;              // rows x k
    std::vector<double> s; // k values
    Matrix v;              // cols x k
    int rows = 0;
    int cols = 0;

    int rank() const { return int(s.size()); }
};

// One-sided Jacobi. Sweeps orthogonalize column pairs until the off-diagonal
// norm drops below 1e-12 * ||A||_F or a full sweep applies no rotation,
// capped at 60 sweeps.
SvdFactorization svd(const Matrix& a);

// Best rank-k approximation, sum of the k leading outer products.
Matrix truncate(const SvdFactorization& f, int k);

struct EnergyWeights {
    double total;                // sum of squared singular values
    std::vector<double> weights; // each value's share, sums to 1
};

EnergyWeights energy_weights(const std::vector<double>& s);

// Smallest k whose cumulative energy share reaches the cutoff (0 < cutoff
// <= 1). A cutoff of 1 returns the index of the last nonzero value.
int select_rank_energy(const std::vector<double>& s, double cutoff);

struct CurvePoint {
    int k;
    double stddev; // population std-dev of the rank-k reconstruction entries
};

std::vector<CurvePoint> stddev_curve(const Plane& plane, int k_max);

struct RankSelection {
    int s_limit; // knee of the std-dev curve (end of the initial steep zone)
    int s_opt;   // min(s_limit, energy-cutoff rank)
};

RankSelection select_rank_curve(std::span<const CurvePoint> curve,
                                std::span<const double> s,
                                double knee_frac = 0.1,
                                double energy_cutoff = 0.99);

// Per-channel rank-k reconstruction of an RGB frame; entries are clamped to
// [0, 255] and rounded half-up. Full rank reproduces the input exactly.
Image refine_background(const Image& img, const std::array<int, 3>& ranks);

struct RefineResult {
    Image image;
    std::array<int, 3> ranks; // the per-channel ranks actually used
};

// Same, but each channel picks its own rank from the std-dev curve knee and
// the energy cutoff.
RefineResult refine_background_auto(const Image& img, double knee_frac = 0.1,
                                    double energy_cutoff = 0.99);

Matrix plane_matrix(const Plane& p);

} // namespace teamseg
