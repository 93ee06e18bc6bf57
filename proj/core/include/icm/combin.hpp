#ifndef ICM_COMBIN_HPP
#define ICM_COMBIN_HPP

#include <cstdint>
#include <vector>

namespace icm {

/// Set of 1-based active subcarrier indices, strictly increasing.
struct IndexSet {
    std::vector<int> indices;

    bool operator==(const IndexSet&) const = default;
};

/// Ordered composition of an integer into positive parts.
struct Composition {
    std::vector<int> parts;

    int total() const;
    bool operator==(const Composition&) const = default;
};

/// Exact binomial coefficient. Returns 0 when k > n.
/// Throws std::overflow_error if the result does not fit in 64 bits.
std::uint64_t binom(int n, int k);

/// floor(log2 C(n,k)), exact for all n <= 128 even where C(n,k) itself
/// overflows 64 bits. Requires C(n,k) >= 1.
int floor_log2_binom(int n, int k);

/// Exact floor(log2 x) for x >= 1.
int floor_log2(std::uint64_t x);

void validate_index_set(const IndexSet& s, int n, int k);
void validate_composition(const Composition& c, int i, int k);

/// k-subsets of {1..n} in ascending lexicographic order of the sorted
/// index list; rank 0 is {1,...,k}.
IndexSet unrank_combination(int n, int k, std::uint64_t rank);
std::uint64_t rank_combination(int n, int k, const IndexSet& s);

/// Compositions of i into k positive parts, ordered by the lexicographic
/// order of their cut-position subsets: a composition (v1..vk) maps to the
/// (k-1)-subset {v1, v1+v2, ...} of {1..i-1}. Rank 0 is (1,1,...,1,i-k+1).
Composition unrank_composition(int i, int k, std::uint64_t rank);
std::uint64_t rank_composition(int i, int k, const Composition& c);

}  // namespace icm

#endif
