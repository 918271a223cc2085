#include "teamseg/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "teamseg/errors.hpp"
#include "teamseg/log.hpp"

namespace teamseg {

namespace {

constexpr int kMaxSweeps = 60;
constexpr double kOffTolerance = 1e-12;  // vs ||A||_F
constexpr double kPairTolerance = 1e-15; // per-pair relative orthogonality
constexpr double kRankTolerance = 1e-13; // vs sigma_max, below is "zero"

// Orthogonalize columns of b in place by plane rotations, accumulating the
// rotations into v. Classic one-sided Jacobi with a fixed (p, q) sweep order
// so the result is deterministic.
void jacobi_orthogonalize(Matrix& b, Matrix& v) {
    const int m = b.rows, n = b.cols;
    const double norm_f = frobenius_norm(b);
    if (norm_f == 0.0) return;
    const double off_target = kOffTolerance * norm_f;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off2 = 0.0;
        int rotations = 0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (int i = 0; i < m; ++i) {
                    double bp = b.at(i, p), bq = b.at(i, q);
                    alpha += bp * bp;
                    beta += bq * bq;
                    gamma += bp * bq;
                }
                off2 += gamma * gamma;
                if (gamma == 0.0 ||
                    std::abs(gamma) <= kPairTolerance * std::sqrt(alpha * beta))
                    continue;
                double zeta = (beta - alpha) / (2.0 * gamma);
                double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (int i = 0; i < m; ++i) {
                    double bp = b.at(i, p), bq = b.at(i, q);
                    b.at(i, p) = c * bp - s * bq;
                    b.at(i, q) = s * bp + c * bq;
                }
                for (int i = 0; i < n; ++i) {
                    double vp = v.at(i, p), vq = v.at(i, q);
                    v.at(i, p) = c * vp - s * vq;
                    v.at(i, q) = s * vp + c * vq;
                }
                ++rotations;
            }
        }
        if (std::sqrt(off2) <= off_target || rotations == 0) break;
    }
}

// Fill column j of u with a unit vector orthogonal to columns 0..j-1.
// Candidates are the standard basis vectors; the one keeping the largest
// residual wins, with one re-orthogonalization pass for accuracy.
void complete_column(Matrix& u, int j) {
    const int m = u.rows;
    std::vector<double> best(m), w(m);
    double best_norm = -1.0;
    for (int k = 0; k < m; ++k) {
        std::fill(w.begin(), w.end(), 0.0);
        w[k] = 1.0;
        for (int jj = 0; jj < j; ++jj) {
            double proj = u.at(k, jj); // e_k . u_jj
            for (int i = 0; i < m; ++i) w[i] -= proj * u.at(i, jj);
        }
        double norm2 = 0.0;
        for (double x : w) norm2 += x * x;
        if (norm2 > best_norm) {
            best_norm = norm2;
            best = w;
        }
    }
    for (int pass = 0; pass < 2; ++pass) {
        for (int jj = 0; jj < j; ++jj) {
            double proj = 0.0;
            for (int i = 0; i < m; ++i) proj += best[i] * u.at(i, jj);
            for (int i = 0; i < m; ++i) best[i] -= proj * u.at(i, jj);
        }
    }
    double norm = std::sqrt(
        std::inner_product(best.begin(), best.end(), best.begin(), 0.0));
    for (int i = 0; i < m; ++i) u.at(i, j) = best[i] / norm;
}

SvdFactorization svd_tall(const Matrix& a) {
    const int m = a.rows, n = a.cols;
    Matrix b = a;
    Matrix v = Matrix::identity(n);
    jacobi_orthogonalize(b, v);

    std::vector<double> sigma(n);
    for (int j = 0; j < n; ++j) {
        double s2 = 0.0;
        for (int i = 0; i < m; ++i) s2 += b.at(i, j) * b.at(i, j);
        sigma[j] = std::sqrt(s2);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return sigma[i] > sigma[j]; });

    SvdFactorization f;
    f.rows = m;
    f.cols = n;
    f.s.resize(n);
    f.u = Matrix(m, n);
    f.v = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        int src = order[j];
        f.s[j] = sigma[src];
        for (int i = 0; i < n; ++i) f.v.at(i, j) = v.at(i, src);
        for (int i = 0; i < m; ++i) f.u.at(i, j) = b.at(i, src);
    }

    double sigma_max = f.s.empty() ? 0.0 : f.s[0];
    for (int j = 0; j < n; ++j) {
        if (f.s[j] > kRankTolerance * sigma_max && f.s[j] > 0.0) {
            double inv = 1.0 / f.s[j];
            for (int i = 0; i < m; ++i) f.u.at(i, j) *= inv;
        } else {
            complete_column(f.u, j);
        }
    }
    return f;
}

void canonicalize_signs(SvdFactorization& f) {
    for (int j = 0; j < f.rank(); ++j) {
        int arg = 0;
        double best = std::abs(f.u.at(0, j));
        for (int i = 1; i < f.u.rows; ++i) {
            double mag = std::abs(f.u.at(i, j));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (f.u.at(arg, j) < 0.0) {
            for (int i = 0; i < f.u.rows; ++i) f.u.at(i, j) = -f.u.at(i, j);
            for (int i = 0; i < f.v.rows; ++i) f.v.at(i, j) = -f.v.at(i, j);
        }
    }
}

} // namespace

SvdFactorization svd(const Matrix& a) {
    if (a.rows < 1 || a.cols < 1) throw NumericError("svd: empty matrix");
    for (double x : a.data)
        if (!std::isfinite(x)) throw NumericError("svd: non-finite entry");

    SvdFactorization f;
    if (a.rows >= a.cols) {
        f = svd_tall(a);
    } else {
        SvdFactorization ft = svd_tall(a.transposed());
        f.rows = a.rows;
        f.cols = a.cols;
        f.s = std::move(ft.s);
        f.u = std::move(ft.v);
        f.v = std::move(ft.u);
    }
    canonicalize_signs(f);
    return f;
}

Matrix truncate(const SvdFactorization& f, int k) {
    if (k < 1 || k > f.rank())
        throw ConfigError("truncate: rank " + std::to_string(k) +
                          " out of range [1, " + std::to_string(f.rank()) + "]");
    Matrix out(f.rows, f.cols);
    for (int t = 0; t < k; ++t) {
        double s = f.s[t];
        if (s == 0.0) continue;
        for (int i = 0; i < f.rows; ++i) {
            double us = f.u.at(i, t) * s;
            for (int j = 0; j < f.cols; ++j) out.at(i, j) += us * f.v.at(j, t);
        }
    }
    return out;
}

EnergyWeights energy_weights(const std::vector<double>& s) {
    if (s.empty()) throw NumericError("energy_weights: empty spectrum");
    double total = 0.0;
    for (double x : s) {
        if (x < 0.0) throw NumericError("energy_weights: negative singular value");
        total += x * x;
    }
    if (total == 0.0)
        throw NumericError("energy_weights: all singular values are zero");
    EnergyWeights e;
    e.total = total;
    e.weights.reserve(s.size());
    for (double x : s) e.weights.push_back(x * x / total);
    return e;
}

int select_rank_energy(const std::vector<double>& s, double cutoff) {
    if (!(cutoff > 0.0) || cutoff > 1.0)
        throw ConfigError("select_rank_energy: cutoff must be in (0, 1]");
    EnergyWeights e = energy_weights(s);
    if (cutoff >= 1.0) {
        int last = 0;
        for (size_t i = 0; i < s.size(); ++i)
            if (s[i] > 0.0) last = int(i) + 1;
        return last;
    }
    double cum = 0.0;
    for (size_t i = 0; i < e.weights.size(); ++i) {
        cum += e.weights[i];
        // tolerance: cutoffs like 0.9 against shares built from decimal
        // literals can miss by one ulp
        if (cum >= cutoff - 1e-12) return int(i) + 1;
    }
    return int(e.weights.size());
}

Matrix plane_matrix(const Plane& p) {
    Matrix m(p.height, p.width);
    m.data = p.samples;
    return m;
}

namespace {

// Std-dev of the rank-k reconstruction without forming it: the Frobenius
// norm is the partial sum of squared singular values, and the entry sum
// follows from the rank-one structure.
std::vector<CurvePoint> curve_from_svd(const SvdFactorization& f, int k_max) {
    const double n_entries = double(f.rows) * double(f.cols);
    std::vector<double> col_u(f.rank(), 0.0), col_v(f.rank(), 0.0);
    for (int t = 0; t < f.rank(); ++t) {
        for (int i = 0; i < f.rows; ++i) col_u[t] += f.u.at(i, t);
        for (int j = 0; j < f.cols; ++j) col_v[t] += f.v.at(j, t);
    }
    std::vector<CurvePoint> curve;
    curve.reserve(k_max);
    double sumsq = 0.0, sum_entries = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        int t = k - 1;
        sumsq += f.s[t] * f.s[t];
        sum_entries += f.s[t] * col_u[t] * col_v[t];
        double mean = sum_entries / n_entries;
        double var = sumsq / n_entries - mean * mean;
        curve.push_back({k, std::sqrt(std::max(0.0, var))});
    }
    return curve;
}

uint8_t clamp_round(double x) {
    double v = std::floor(x + 0.5); // half-up
    if (v < 0.0) v = 0.0;
    if (v > 255.0) v = 255.0;
    return uint8_t(v);
}

const std::vector<uint8_t>& channel_of(const Image& img, int c) {
    return c == 0 ? img.r : c == 1 ? img.g : img.b;
}

std::vector<uint8_t>& channel_of(Image& img, int c) {
    return c == 0 ? img.r : c == 1 ? img.g : img.b;
}

Matrix channel_matrix(const Image& img, int c) {
    Matrix m(img.height, img.width);
    const auto& ch = channel_of(img, c);
    for (size_t i = 0; i < ch.size(); ++i) m.data[i] = ch[i];
    return m;
}

} // namespace

std::vector<CurvePoint> stddev_curve(const Plane& plane, int k_max) {
    SvdFactorization f = svd(plane_matrix(plane));
    if (k_max < 1 || k_max > f.rank())
        throw ConfigError("stddev_curve: k_max out of range [1, " +
                          std::to_string(f.rank()) + "]");
    return curve_from_svd(f, k_max);
}

RankSelection select_rank_curve(std::span<const CurvePoint> curve,
                                std::span<const double> s, double knee_frac,
                                double energy_cutoff) {
    if (curve.size() < 3)
        throw NumericError("select_rank_curve: need at least 3 curve points");

    double d1 = curve[1].stddev - curve[0].stddev;
    if (std::abs(d1) <= 1e-12 * std::max(1.0, std::abs(curve[0].stddev))) {
        log::warn("select_rank_curve: flat curve, keeping rank 1");
        return {1, 1};
    }

    int s_limit = curve.back().k;
    for (size_t j = 1; j + 1 < curve.size(); ++j) {
        double d = curve[j + 1].stddev - curve[j].stddev;
        if (std::abs(d) < knee_frac * std::abs(d1)) {
            s_limit = curve[j].k;
            break;
        }
    }

    int k_energy = select_rank_energy(std::vector<double>(s.begin(), s.end()),
                                      energy_cutoff);
    int s_opt = std::max(1, std::min(s_limit, k_energy));
    return {s_limit, s_opt};
}

Image refine_background(const Image& img, const std::array<int, 3>& ranks) {
    int max_rank = std::min(img.width, img.height);
    Image out(img.width, img.height);
    for (int c = 0; c < 3; ++c) {
        if (ranks[c] < 1 || ranks[c] > max_rank)
            throw ConfigError("refine_background: rank " + std::to_string(ranks[c]) +
                              " out of range for channel " + std::to_string(c));
        SvdFactorization f = svd(channel_matrix(img, c));
        Matrix t = truncate(f, ranks[c]);
        auto& ch = channel_of(out, c);
        for (size_t i = 0; i < ch.size(); ++i) ch[i] = clamp_round(t.data[i]);
    }
    return out;
}

RefineResult refine_background_auto(const Image& img, double knee_frac,
                                    double energy_cutoff) {
    RefineResult res;
    res.image = Image(img.width, img.height);
    for (int c = 0; c < 3; ++c) {
        SvdFactorization f = svd(channel_matrix(img, c));
        auto curve = curve_from_svd(f, f.rank());
        int k;
        if (curve.size() < 3) {
            k = f.rank();
        } else {
            k = select_rank_curve(curve, f.s, knee_frac, energy_cutoff).s_opt;
        }
        Matrix t = truncate(f, k);
        auto& ch = channel_of(res.image, c);
        for (size_t i = 0; i < ch.size(); ++i) ch[i] = clamp_round(t.data[i]);
        res.ranks[c] = k;
    }
    return res;
}

} // namespace teamseg
