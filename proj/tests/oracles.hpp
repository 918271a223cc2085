#pragma once

// Reference implementations the tests check the library against. Everything
// here is written straight from the defining formulas and deliberately takes
// a different route than the library (BFS instead of DFS for components,
// two-sided Jacobi on the Gram matrix instead of one-sided on A, full sorts
// instead of nth_element), so agreement is evidence rather than tautology.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "teamseg/image.hpp"
#include "teamseg/log.hpp"
#include "teamseg/matrix.hpp"
#include "teamseg/mlp.hpp"
#include "teamseg/rng.hpp"
#include "teamseg/svd.hpp"

namespace oracle {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Linear interpolation at rank (n-1)*q of the sorted sample.
inline double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    double pos = q * double(v.size() - 1);
    size_t i = size_t(pos);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (pos - double(i)) * (v[i + 1] - v[i]);
}

inline double gauss1(double x, double mu, double sigma) {
    const double two_pi = 2.0 * 3.14159265358979323846;
    double d = x - mu;
    return std::exp(-d * d / (2.0 * sigma * sigma)) / std::sqrt(two_pi * sigma * sigma);
}

inline double kde(const std::vector<double>& x,
                  const std::vector<std::vector<double>>& samples,
                  const std::vector<double>& sigma) {
    double sum = 0.0;
    for (const auto& s : samples) {
        double prod = 1.0;
        for (size_t j = 0; j < x.size(); ++j) prod *= gauss1(x[j], s[j], sigma[j]);
        sum += prod;
    }
    return sum / double(samples.size());
}

// Eigenvalues of a symmetric matrix by cyclic two-sided Jacobi, descending.
inline std::vector<double> sym_eigenvalues(teamseg::Matrix a) {
    int n = a.rows;
    double norm2 = 0.0;
    for (double v : a.data) norm2 += v * v;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off2 = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off2 += 2.0 * a.at(p, q) * a.at(p, q);
        if (off2 <= 1e-28 * norm2) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = a.at(p, q);
                if (apq == 0.0) continue;
                double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
                for (int k = 0; k < n; ++k) {
                    double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(size_t(n), 0.0);
    for (int i = 0; i < n; ++i) eig[size_t(i)] = a.at(i, i);
    std::sort(eig.rbegin(), eig.rend());
    return eig;
}

// Singular values from the eigenvalues of the smaller Gram matrix.
inline std::vector<double> singular_values(const teamseg::Matrix& a) {
    teamseg::Matrix gram = a.rows >= a.cols
                               ? teamseg::multiply(a.transposed(), a)
                               : teamseg::multiply(a, a.transposed());
    std::vector<double> eig = sym_eigenvalues(gram);
    for (double& v : eig) v = std::sqrt(std::max(0.0, v));
    return eig;
}

inline teamseg::Matrix reconstruct(const teamseg::SvdFactorization& f) {
    teamseg::Matrix out(f.rows, f.cols);
    for (int t = 0; t < f.rank(); ++t)
        for (int i = 0; i < f.rows; ++i)
            for (int j = 0; j < f.cols; ++j)
                out.at(i, j) += f.s[size_t(t)] * f.u.at(i, t) * f.v.at(j, t);
    return out;
}

inline double max_abs_diff(const teamseg::Matrix& a, const teamseg::Matrix& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

// max |M^T M - I|
inline double ortho_error(const teamseg::Matrix& m) {
    teamseg::Matrix g = teamseg::multiply(m.transposed(), m);
    double worst = 0.0;
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j)
            worst = std::max(worst, std::abs(g.at(i, j) - (i == j ? 1.0 : 0.0)));
    return worst;
}

inline teamseg::Matrix random_matrix(teamseg::Rng& rng, int rows, int cols,
                                     double lo = -50.0, double hi = 50.0) {
    teamseg::Matrix m(rows, cols);
    for (double& v : m.data) v = rng.uniform(lo, hi);
    return m;
}

inline double two_pass_stddev(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::sqrt(var / double(v.size()));
}

// BFS 8-connected components of foreground pixels, as canonical pixel sets.
inline std::vector<std::set<std::pair<int, int>>> flood_components(
    const teamseg::Mask& mask, int min_area) {
    std::vector<char> seen(mask.labels.size(), 0);
    std::vector<std::set<std::pair<int, int>>> out;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            size_t i = mask.index(x, y);
            if (seen[i] || mask.labels[i] != teamseg::kForeground) continue;
            std::set<std::pair<int, int>> comp;
            std::queue<std::pair<int, int>> frontier;
            frontier.push({x, y});
            seen[i] = 1;
            while (!frontier.empty()) {
                auto [cx, cy] = frontier.front();
                frontier.pop();
                comp.insert({cx, cy});
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height)
                            continue;
                        size_t ni = mask.index(nx, ny);
                        if (seen[ni] || mask.labels[ni] != teamseg::kForeground)
                            continue;
                        seen[ni] = 1;
                        frontier.push({nx, ny});
                    }
            }
            if (int(comp.size()) >= min_area) out.push_back(std::move(comp));
        }
    return out;
}

inline double mask_iou(const teamseg::Mask& a, const teamseg::Mask& b, uint8_t label) {
    size_t inter = 0, uni = 0;
    for (size_t i = 0; i < a.labels.size(); ++i) {
        bool in_a = a.labels[i] == label, in_b = b.labels[i] == label;
        inter += in_a && in_b;
        uni += in_a || in_b;
    }
    return uni == 0 ? 1.0 : double(inter) / double(uni);
}

inline std::vector<double*> mlp_params(teamseg::Mlp& net) {
    std::vector<double*> p;
    for (double& w : net.w1) p.push_back(&w);
    for (double& w : net.b1) p.push_back(&w);
    for (double& w : net.w2) p.push_back(&w);
    for (double& w : net.b2) p.push_back(&w);
    return p;
}

// Central finite differences of the single-sample squared error.
inline std::vector<double> fd_gradient(teamseg::Mlp net, const std::vector<double>& x,
                                       const std::vector<double>& target,
                                       double h = 1e-5) {
    std::vector<double*> params = mlp_params(net);
    std::vector<double> grad(params.size());
    for (size_t i = 0; i < params.size(); ++i) {
        double saved = *params[i];
        *params[i] = saved + h;
        double ep = teamseg::quadratic_error(teamseg::forward(net, x), target);
        *params[i] = saved - h;
        double em = teamseg::quadratic_error(teamseg::forward(net, x), target);
        *params[i] = saved;
        grad[i] = (ep - em) / (2.0 * h);
    }
    return grad;
}

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("teamseg_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

// Redirects library warnings into a buffer for the lifetime of the object.
class WarnCapture {
public:
    WarnCapture() {
        buffer().clear();
        prev_ = teamseg::log::set_warn_sink(&record);
    }
    ~WarnCapture() { teamseg::log::set_warn_sink(prev_); }
    WarnCapture(const WarnCapture&) = delete;
    WarnCapture& operator=(const WarnCapture&) = delete;

    const std::vector<std::string>& messages() const { return buffer(); }
    bool contains(const std::string& needle) const {
        for (const std::string& m : buffer())
            if (m.find(needle) != std::string::npos) return true;
        return false;
    }

private:
    static std::vector<std::string>& buffer() {
        static std::vector<std::string> msgs;
        return msgs;
    }
    static void record(const std::string& m) { buffer().push_back(m); }
    teamseg::log::Sink prev_;
};

} // namespace oracle
