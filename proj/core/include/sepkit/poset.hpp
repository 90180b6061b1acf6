#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sepkit/pairs.hpp"

namespace sepkit {

// Fixed-width bit vector indexed by pair index; bit p is set iff the owning
// model separates pair p.
class SeparableSet {
public:
    SeparableSet() = default;
    explicit SeparableSet(std::size_t width);

    std::size_t width() const { return width_; }
    bool test(std::size_t i) const;
    void set(std::size_t i);
    std::size_t count() const;

    // True iff every set bit of *this is set in other. Widths must match.
    bool subset_of(const SeparableSet& other) const;

    bool operator==(const SeparableSet&) const = default;

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

// A bipartition of the class universe. A class absent from both sides is
// unassigned and separates no pair involving it.
struct AbstractModel {
    std::vector<ClassId> side_a;  // sorted, disjoint from side_b
    std::vector<ClassId> side_b;  // sorted
    std::optional<PairId> label;  // defining pair, when the model has one

    static AbstractModel make(std::vector<ClassId> a, std::vector<ClassId> b,
                              std::optional<PairId> label = std::nullopt);

    bool in_side_a(ClassId c) const;
    bool in_side_b(ClassId c) const;
};

bool separates(const AbstractModel& m, const PairId& p);
bool separates(const AbstractModel& m, const PairId& p, std::size_t n);  // range-checked
SeparableSet separable_set(const AbstractModel& m, std::size_t n);

bool leq(const SeparableSet& m1, const SeparableSet& m2);
bool equivalent(const SeparableSet& m1, const SeparableSet& m2);

// Groups indices by identical bit vectors; groups ordered by first occurrence.
std::vector<std::vector<std::size_t>> equivalence_classes(std::span<const SeparableSet> sets);

struct HasseDiagram {
    std::vector<std::vector<std::size_t>> classes;        // equivalence classes of input indices
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // (u, v): class v strictly below u, covering
    std::vector<std::size_t> maximal;                     // class indices with no superior
};

HasseDiagram hasse_diagram(std::span<const SeparableSet> sets);

using SetBank = std::map<PairId, SeparableSet>;
using ModelBank = std::map<PairId, AbstractModel>;

SetBank bank_sets(const ModelBank& bank, std::size_t n);

// A pair p is fundamental iff every head separating p is equivalent to p's
// own head. Every bank[p] must have bit p set.
std::vector<PairId> fundamental_pairs(const SetBank& bank);

struct CoverOptions {
    std::uint64_t node_budget = 1ULL << 25;
    std::size_t max_candidates = 25;  // after equivalence dedup
};

// Minimum number of sets whose union covers all pairs; exact branch and bound
// over equivalence-class representatives.
std::size_t fundamental_number_exact(const std::vector<SeparableSet>& sets, std::size_t n,
                                     const CoverOptions& opts = {});

// Greedy upper bound: max new coverage, ties broken by lowest index.
std::size_t fundamental_number_greedy(const std::vector<SeparableSet>& sets, std::size_t n);

// (ceil(log2 n), n*(n-1)/2) for n >= 2.
std::pair<std::size_t, std::size_t> bounds(std::size_t n);

// k single-bit models over 2^k classes; jointly separate all pairs.
std::vector<AbstractModel> construct_hypercube(std::size_t k);

// Per-pair head assignment for the hypercube: the model of the lowest
// differing bit of the pair.
ModelBank hypercube_bank(std::size_t k);

// For each pair (I,J), I<J: I on side a, J on side b, every other class
// split across the bipartition (unassigned). Each model separates exactly
// its defining pair, so all n*(n-1)/2 models are pairwise non-equivalent.
ModelBank construct_parity(std::size_t n);

struct Theorem1Check {
    std::size_t dedup_fundamental_count = 0;
    std::size_t exact_cover = 0;
    bool agrees = false;
};

Theorem1Check theorem1_check(const SetBank& bank, const CoverOptions& opts = {});

struct PosetReport {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> equivalence_classes;
    std::vector<std::pair<std::size_t, std::size_t>> hasse_edges;
    std::vector<std::size_t> maximal;
    std::vector<PairId> fundamental_pairs;
    std::optional<std::size_t> fundamental_number;
    std::size_t lower_bound = 0;
    std::size_t upper_bound = 0;
};

// Full poset analysis of a head bank. Computes the exact fundamental number
// when the search fits the options, otherwise leaves it unknown.
PosetReport analyze_bank(const SetBank& bank, std::size_t n, const CoverOptions& opts = {});

// Poset analysis of an arbitrary model list; no per-pair head semantics, so
// fundamental pairs stay empty.
PosetReport analyze_sets(const std::vector<SeparableSet>& sets, std::size_t n,
                         const CoverOptions& opts = {});

// DOT rendering of the Hasse diagram: one node per equivalence class, labels
// listing member pairs, maximal classes filled.
std::string to_dot(const PosetReport& report, const SetBank& bank,
                   const std::vector<std::string>& class_names = {});

}  // namespace sepkit
