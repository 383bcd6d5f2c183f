#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cleandec/matcore.hpp"

namespace cleandec {

/// Seeded generator: std::mt19937_64 words turned into doubles with 53 random
/// bits, normals by Box-Muller. The integer stream is fixed by the C++ standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    Index uniform_int(Index lo, Index hi);
    double normal();
    /// Real and imaginary parts independent N(0, 1/2), so E|z|^2 = 1.
    Complex complex_normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Seed of the index-th member derived from a corpus seed (splitmix64 finalizer).
std::uint64_t member_seed(std::uint64_t seed, std::uint64_t index);

Matrix random_gaussian(Index rows, Index cols, Rng& rng);
Matrix random_unitary(Index n, Rng& rng);
OrthoProjection random_projection(Index n, Index rank, Rng& rng);

enum class CorpusFamily { Gaussian, Jordan, Unitary, RankDeficient, ClusterHalf, Shift };

std::string_view to_string(CorpusFamily family);
CorpusFamily parse_family(std::string_view name);
std::vector<CorpusFamily> all_families();

struct CorpusConfig {
    std::uint64_t seed = 0;
    std::size_t count = 100;
    Index min_n = 1;
    Index max_n = 16;
    std::vector<CorpusFamily> families = all_families();
};

struct CorpusMember {
    std::size_t index = 0;
    CorpusFamily family = CorpusFamily::Gaussian;
    Matrix matrix;
};

/// Member i uses family families[i % families.size()], a dimension uniform in
/// [min_n, max_n] and its own generator seeded with member_seed(seed, i).
std::vector<CorpusMember> generate_corpus(const CorpusConfig& config);

/// One member of the given family; exposed so a single family can be sampled.
Matrix generate_member(CorpusFamily family, Index n, Rng& rng);

}  // namespace cleandec
