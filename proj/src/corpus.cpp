#include "cleandec/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "cleandec/errors.hpp"
#include "cleandec/witness.hpp"

namespace cleandec {

Index Rng::uniform_int(Index lo, Index hi) {
    if (hi < lo) throw InputError("Rng::uniform_int: empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    // rejection keeps the draw unbiased
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return lo + static_cast<Index>(x % span);
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * std::sqrt(0.5);
}

std::uint64_t member_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
    }
    return m;
}

Matrix random_unitary(Index n, Rng& rng) {
    const Matrix g = random_gaussian(n, n, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // make the distribution Haar by fixing the phases of diag(R)
    for (Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

OrthoProjection random_projection(Index n, Index rank, Rng& rng) {
    if (rank < 0 || rank > n) throw InputError("random_projection: rank out of range");
    const Matrix u = random_unitary(n, rng);
    return OrthoProjection::from_bases(u.leftCols(rank), u.rightCols(n - rank));
}

namespace {

constexpr std::array<CorpusFamily, 6> kFamilies{CorpusFamily::Gaussian,      CorpusFamily::Jordan,
                                                CorpusFamily::Unitary,       CorpusFamily::RankDeficient,
                                                CorpusFamily::ClusterHalf,   CorpusFamily::Shift};

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(rng.uniform(std::log(lo), std::log(hi))); }

Matrix gaussian_member(Index n, Rng& rng) {
    const double scale = log_uniform(rng, 0.05, 4.0);
    return random_gaussian(n, n, rng) * (scale / std::sqrt(static_cast<double>(n)));
}

Matrix jordan_member(Index n, Rng& rng) {
    // moduli on both sides of 1/4, 1/2 and 3/4, including the crossings themselves
    constexpr std::array<double, 11> kModuli{0.0, 0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 1.0, 1.5, 2.0};
    const bool nilpotent = rng.uniform() < 0.25;
    Matrix j = Matrix::Zero(n, n);
    Index at = 0;
    while (at < n) {
        const Index size = std::min<Index>(rng.uniform_int(1, 4), n - at);
        Complex lambda = 0.0;
        if (!nilpotent) {
            const double modulus = kModuli[static_cast<std::size_t>(rng.uniform_int(0, kModuli.size() - 1))];
            lambda = std::polar(modulus, rng.uniform(0.0, 2.0 * std::numbers::pi));
        }
        for (Index i = 0; i < size; ++i) {
            j(at + i, at + i) = lambda;
            if (i + 1 < size) j(at + i, at + i + 1) = 1.0;
        }
        at += size;
    }
    if (rng.uniform() < 0.5) {
        const Matrix u = random_unitary(n, rng);
        j = u * j * u.adjoint();
    }
    return j;
}

Matrix rank_deficient_member(Index n, Rng& rng) {
    const Index k = rng.uniform_int(0, n - 1);
    if (k == 0) return Matrix::Zero(n, n);
    const double scale = log_uniform(rng, 0.1, 4.0) / std::sqrt(static_cast<double>(n * k));
    return random_gaussian(n, k, rng) * random_gaussian(k, n, rng) * scale;
}

Matrix cluster_half_member(Index n, Rng& rng) {
    RealVector sigma(n);
    for (Index i = 0; i < n; ++i) sigma(i) = rng.uniform(0.0, 2.0);
    const Index clustered = rng.uniform_int(1, std::max<Index>(1, n / 2));
    const bool exact = rng.uniform() < 0.125;
    for (Index i = 0; i < clustered; ++i) sigma(i) = exact && i == 0 ? 0.5 : rng.uniform(0.499, 0.501);
    const Matrix u = random_unitary(n, rng);
    const Matrix v = random_unitary(n, rng);
    return u * sigma.cast<Complex>().asDiagonal() * v.adjoint();
}

}  // namespace

std::string_view to_string(CorpusFamily family) {
    switch (family) {
        case CorpusFamily::Gaussian: return "gaussian";
        case CorpusFamily::Jordan: return "jordan";
        case CorpusFamily::Unitary: return "unitary";
        case CorpusFamily::RankDeficient: return "rank-deficient";
        case CorpusFamily::ClusterHalf: return "cluster-half";
        case CorpusFamily::Shift: return "shift";
    }
    return "gaussian";
}

CorpusFamily parse_family(std::string_view name) {
    for (CorpusFamily f : kFamilies) {
        if (name == to_string(f)) return f;
    }
    throw InputError("unknown corpus family '" + std::string(name) + "'");
}

std::vector<CorpusFamily> all_families() { return {kFamilies.begin(), kFamilies.end()}; }

Matrix generate_member(CorpusFamily family, Index n, Rng& rng) {
    if (n < 1) throw InputError("generate_member: n must be at least 1");
    switch (family) {
        case CorpusFamily::Gaussian: return gaussian_member(n, rng);
        case CorpusFamily::Jordan: return jordan_member(n, rng);
        case CorpusFamily::Unitary: return random_unitary(n, rng);
        case CorpusFamily::RankDeficient: return rank_deficient_member(n, rng);
        case CorpusFamily::ClusterHalf: return cluster_half_member(n, rng);
        case CorpusFamily::Shift: {
            const Matrix v = shift_matrix(n);
            return rng.uniform() < 0.5 ? v : Matrix(v.adjoint());
        }
    }
    throw InputError("generate_member: unknown family");
}

std::vector<CorpusMember> generate_corpus(const CorpusConfig& config) {
    if (config.families.empty()) throw InputError("generate_corpus: no families selected");
    if (config.min_n < 1 || config.max_n > 512 || config.min_n > config.max_n) {
        throw InputError("generate_corpus: dimension range must lie within [1, 512]");
    }
    std::vector<CorpusMember> out;
    out.reserve(config.count);
    for (std::size_t i = 0; i < config.count; ++i) {
        Rng rng(member_seed(config.seed, i));
        CorpusMember m;
        m.index = i;
        m.family = config.families[i % config.families.size()];
        const Index n = rng.uniform_int(config.min_n, config.max_n);
        m.matrix = generate_member(m.family, n, rng);
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace cleandec
