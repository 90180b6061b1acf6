#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "sepkit/poset.hpp"
#include "sepkit/rng.hpp"

using namespace sepkit;

namespace {

AbstractModel model(std::vector<ClassId> a, std::vector<ClassId> b) {
    return AbstractModel::make(std::move(a), std::move(b));
}

SeparableSet set_of(std::size_t n, const std::vector<PairId>& pairs) {
    SeparableSet s(pair_count(n));
    for (const PairId& p : pairs) s.set(pair_index(p, n));
    return s;
}

// Independent exhaustive minimum set cover: tries every sub-collection.
std::size_t cover_oracle(const std::vector<SeparableSet>& sets, std::size_t n) {
    const std::size_t universe = pair_count(n);
    std::size_t best = sets.size() + 1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << sets.size()); ++mask) {
        std::vector<bool> covered(universe, false);
        std::size_t members = 0;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (!(mask >> i & 1)) continue;
            ++members;
            for (std::size_t b = 0; b < universe; ++b)
                if (sets[i].test(b)) covered[b] = true;
        }
        if (std::all_of(covered.begin(), covered.end(), [](bool c) { return c; }))
            best = std::min(best, members);
    }
    return best;
}

std::vector<SeparableSet> random_sets(CounterRng& rng, std::size_t n, std::size_t count) {
    // random models give realistic (non-arbitrary) bit patterns
    const std::size_t pc = pair_count(n);
    std::vector<SeparableSet> sets;
    while (sets.size() < count) {
        std::vector<ClassId> a, b;
        for (ClassId c = 0; c < n; ++c) {
            const auto r = rng.next_u64() % 3;
            if (r == 0) a.push_back(c);
            if (r == 1) b.push_back(c);
        }
        SeparableSet s = separable_set(model(a, b), n);
        if (s.count() > 0) sets.push_back(std::move(s));
    }
    // patch coverage so the instance satisfies the covering precondition
    SeparableSet all(pc);
    for (const auto& s : sets)
        for (std::size_t i = 0; i < pc; ++i)
            if (s.test(i)) all.set(i);
    for (std::size_t i = 0; i < pc; ++i)
        if (!all.test(i)) {
            const PairId p = pair_from_index(i, n);
            sets.push_back(separable_set(model({p.lo}, {p.hi}), n));
        }
    return sets;
}

}  // namespace

TEST_CASE("separates: defining pair on opposite sides") {
    const auto m = model({0}, {1});
    CHECK(separates(m, PairId(0, 1), 2));
}

TEST_CASE("separates: unassigned class separates nothing") {
    const auto m = model({0}, {1});
    CHECK_FALSE(separates(m, PairId(0, 2), 3));
}

TEST_CASE("separates: hypercube bit-0 model over 4 classes") {
    // classes 00,01,10,11; bit 0 splits {00,10} from {01,11}
    const auto models = construct_hypercube(2);
    CHECK(separates(models[0], PairId(0, 1), 4));
    CHECK_FALSE(separates(models[0], PairId(0, 2), 4));
}

TEST_CASE("separates: out-of-range class is a domain error") {
    const auto m = model({0}, {1});
    CHECK_THROWS_AS(separates(m, PairId(0, 5), 3), DomainError);
}

TEST_CASE("separable_set: complete bipartition cross-pairs") {
    const auto s = separable_set(model({0, 1}, {2, 3}), 4);
    CHECK(s == set_of(4, {PairId(0, 2), PairId(0, 3), PairId(1, 2), PairId(1, 3)}));
    CHECK(s.count() == 4);
}

TEST_CASE("separable_set: empty model separates nothing") {
    const auto s = separable_set(model({}, {}), 3);
    CHECK(s.count() == 0);
}

TEST_CASE("separable_set: one-vs-two split") {
    const auto s = separable_set(model({0}, {1, 2}), 3);
    CHECK(s == set_of(3, {PairId(0, 1), PairId(0, 2)}));
}

TEST_CASE("leq: subset, reflexive, incomparable") {
    const auto a = set_of(3, {PairId(0, 1)});
    const auto b = set_of(3, {PairId(0, 1), PairId(0, 2)});
    const auto c = set_of(3, {PairId(0, 2)});
    CHECK(leq(a, b));
    CHECK_FALSE(leq(b, a));
    CHECK(leq(a, a));
    CHECK_FALSE(leq(a, c));
    CHECK_FALSE(leq(c, a));
}

TEST_CASE("leq: width mismatch is a domain error") {
    CHECK_THROWS_AS(leq(SeparableSet(3), SeparableSet(6)), DomainError);
}

TEST_CASE("equivalent: identical vs strict subset") {
    const auto a = set_of(3, {PairId(0, 1)});
    const auto b = set_of(3, {PairId(0, 1), PairId(0, 2)});
    CHECK(equivalent(a, set_of(3, {PairId(0, 1)})));
    CHECK_FALSE(equivalent(a, b));
}

TEST_CASE("order properties on random sets") {
    CounterRng rng(7, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto sets = random_sets(rng, 4, 3);
        const auto& x = sets[0];
        const auto& y = sets[1];
        const auto& z = sets[2];
        CHECK(leq(x, x));  // reflexive
        if (leq(x, y) && leq(y, z)) CHECK(leq(x, z));  // transitive
        if (leq(x, y) && leq(y, x)) CHECK(equivalent(x, y));  // antisymmetric up to equivalence
    }
}

TEST_CASE("equivalence_classes: grouping and singletons") {
    const auto a = set_of(3, {PairId(0, 1)});
    const auto b = set_of(3, {PairId(0, 2)});
    const std::vector<SeparableSet> v{a, a, b};
    CHECK(equivalence_classes(v) ==
          std::vector<std::vector<std::size_t>>{{0, 1}, {2}});

    const std::vector<SeparableSet> distinct{a, b};
    CHECK(equivalence_classes(distinct).size() == 2);

    CHECK(equivalence_classes(std::vector<SeparableSet>{}).empty());
}

TEST_CASE("equivalence_classes: hypercube k=2 single-bit pairs collapse to 2 classes") {
    // the four pairs differing in exactly one bit, each assigned its bit model
    const auto bank = bank_sets(hypercube_bank(2), 4);
    std::vector<SeparableSet> vertical;
    for (const PairId& p : {PairId(0, 1), PairId(2, 3), PairId(0, 2), PairId(1, 3)})
        vertical.push_back(bank.at(p));
    CHECK(equivalence_classes(vertical).size() == 2);
}

TEST_CASE("hasse_diagram: chain gets only covering edges") {
    const auto a = set_of(4, {PairId(0, 1)});
    const auto b = set_of(4, {PairId(0, 1), PairId(0, 2)});
    const auto c = set_of(4, {PairId(0, 1), PairId(0, 2), PairId(0, 3)});
    const std::vector<SeparableSet> v{a, b, c};
    const auto h = hasse_diagram(v);
    REQUIRE(h.classes.size() == 3);
    // classes indexed by first occurrence: 0=a, 1=b, 2=c
    std::set<std::pair<std::size_t, std::size_t>> edges(h.edges.begin(), h.edges.end());
    CHECK(edges == std::set<std::pair<std::size_t, std::size_t>>{{2, 1}, {1, 0}});
    CHECK(h.maximal == std::vector<std::size_t>{2});
}

TEST_CASE("hasse_diagram: antichain has no edges") {
    const std::vector<SeparableSet> v{set_of(3, {PairId(0, 1)}), set_of(3, {PairId(0, 2)}),
                                      set_of(3, {PairId(1, 2)})};
    CHECK(hasse_diagram(v).edges.empty());
}

TEST_CASE("hasse_diagram: transitive closure reproduces leq reachability") {
    CounterRng rng(11, 1);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + rng.next_u64() % 3;
        const std::size_t m = 2 + rng.next_u64() % 11;  // up to 12 models
        const auto sets = random_sets(rng, n, m);
        const auto h = hasse_diagram(sets);
        const std::size_t k = h.classes.size();

        // reachability via emitted edges
        std::vector<std::vector<bool>> reach(k, std::vector<bool>(k, false));
        for (const auto& [u, v] : h.edges) reach[u][v] = true;
        for (std::size_t w = 0; w < k; ++w)
            for (std::size_t u = 0; u < k; ++u)
                for (std::size_t v = 0; v < k; ++v)
                    if (reach[u][w] && reach[w][v]) reach[u][v] = true;

        for (std::size_t u = 0; u < k; ++u)
            for (std::size_t v = 0; v < k; ++v) {
                if (u == v) continue;
                const auto& su = sets[h.classes[u].front()];
                const auto& sv = sets[h.classes[v].front()];
                const bool strictly_below = leq(sv, su) && !equivalent(su, sv);
                CHECK(reach[u][v] == strictly_below);
            }
    }
}

TEST_CASE("fundamental_pairs: every head separates only its own pair") {
    const std::size_t n = 3;
    SetBank bank;
    for (const PairId& p : all_pairs(n)) bank.emplace(p, set_of(n, {p}));
    CHECK(fundamental_pairs(bank).size() == pair_count(n));
}

TEST_CASE("fundamental_pairs: hypercube k=2 matches brute-force definition") {
    const auto bank = bank_sets(hypercube_bank(2), 4);
    const auto fp = fundamental_pairs(bank);

    // brute force over Def. 6: p fundamental iff every separating head is equivalent
    std::vector<PairId> expected;
    for (const auto& [p, sp] : bank) {
        bool fundamental = true;
        for (const auto& [q, sq] : bank)
            if (sq.test(pair_index(p, 4)) && !(sq == sp)) fundamental = false;
        if (fundamental) expected.push_back(p);
    }
    CHECK(fp == expected);

    // pairs differing in one bit are fundamental, two-bit pairs are not
    const std::set<PairId> fps(fp.begin(), fp.end());
    CHECK(fps.count(PairId(0, 1)) == 1);
    CHECK(fps.count(PairId(0, 2)) == 1);
    CHECK(fps.count(PairId(0, 3)) == 0);  // differs in both bits
    CHECK(fps.count(PairId(1, 2)) == 0);
}

TEST_CASE("fundamental_pairs: head missing its own pair is a contract violation") {
    SetBank bank;
    bank.emplace(PairId(0, 1), set_of(2, {}));
    CHECK_THROWS_AS(fundamental_pairs(bank), DomainError);
}

TEST_CASE("fundamental_number_exact: hypercube instances") {
    for (std::size_t k : {1, 2, 3, 4}) {
        const std::size_t n = std::size_t{1} << k;
        std::vector<SeparableSet> sets;
        for (const auto& m : construct_hypercube(k)) sets.push_back(separable_set(m, n));
        CHECK(fundamental_number_exact(sets, n) == k);
    }
}

TEST_CASE("fundamental_number_exact: n=2 single head") {
    const std::vector<SeparableSet> sets{set_of(2, {PairId(0, 1)})};
    CHECK(fundamental_number_exact(sets, 2) == 1);
}

TEST_CASE("fundamental_number_exact: equals the exhaustive oracle on random instances") {
    CounterRng rng(3, 2);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 3 + rng.next_u64() % 3;  // up to 5 classes
        const auto sets = random_sets(rng, n, 2 + rng.next_u64() % 6);
        CHECK(fundamental_number_exact(sets, n) == cover_oracle(sets, n));
    }
}

TEST_CASE("fundamental_number_exact: uncoverable pair names the pair") {
    const std::vector<SeparableSet> sets{set_of(3, {PairId(0, 1)})};
    CHECK_THROWS_WITH_AS(fundamental_number_exact(sets, 3),
                         "pair (0,2) is not separable by any model", DomainError);
}

TEST_CASE("fundamental_number_greedy: optimal on chains and hypercube k=3") {
    const auto a = set_of(3, {PairId(0, 1)});
    const auto b = set_of(3, {PairId(0, 1), PairId(0, 2), PairId(1, 2)});
    CHECK(fundamental_number_greedy({a, b}, 3) == 1);

    std::vector<SeparableSet> cube;
    for (const auto& m : construct_hypercube(3)) cube.push_back(separable_set(m, 8));
    CHECK(fundamental_number_greedy(cube, 8) == fundamental_number_exact(cube, 8));
    CHECK(fundamental_number_greedy(cube, 8) == 3);
}

TEST_CASE("fundamental_number_greedy: classic gap instance returns optimum+1") {
    // universe = 6 pair slots over n=4; a large trap set makes greedy pick 3
    const std::size_t n = 4;
    const auto ap = all_pairs(n);
    const auto optimal_a = set_of(n, {ap[0], ap[1], ap[2]});
    const auto optimal_b = set_of(n, {ap[3], ap[4], ap[5]});
    const auto trap = set_of(n, {ap[1], ap[2], ap[3], ap[4]});
    const std::vector<SeparableSet> sets{optimal_a, optimal_b, trap};
    CHECK(fundamental_number_exact(sets, n) == 2);
    CHECK(fundamental_number_greedy(sets, n) == 3);
}

TEST_CASE("greedy never beats exact on random instances") {
    CounterRng rng(13, 3);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 3 + rng.next_u64() % 4;
        const auto sets = random_sets(rng, n, 2 + rng.next_u64() % 8);
        CHECK(fundamental_number_greedy(sets, n) >= fundamental_number_exact(sets, n));
    }
}

TEST_CASE("bounds") {
    CHECK(bounds(16) == std::pair<std::size_t, std::size_t>{4, 120});
    CHECK(bounds(2) == std::pair<std::size_t, std::size_t>{1, 1});
    CHECK(bounds(6) == std::pair<std::size_t, std::size_t>{3, 15});
    CHECK_THROWS_AS(bounds(1), DomainError);
    for (std::size_t n = 2; n <= 40; ++n) {
        const auto [lo, hi] = bounds(n);
        CHECK(lo <= hi);
        CHECK((lo == hi) == (n == 2));
    }
}

TEST_CASE("construct_hypercube: k=1 and joint coverage at k=3") {
    const auto one = construct_hypercube(1);
    REQUIRE(one.size() == 1);
    CHECK(separates(one[0], PairId(0, 1), 2));

    const auto cube = construct_hypercube(3);
    for (const PairId& p : all_pairs(8)) {
        bool covered = false;
        for (const auto& m : cube) covered = covered || separates(m, p, 8);
        CHECK(covered);
    }
}

TEST_CASE("construct_hypercube: k=4 attains the lower bound") {
    std::vector<SeparableSet> sets;
    for (const auto& m : construct_hypercube(4)) sets.push_back(separable_set(m, 16));
    CHECK(fundamental_number_exact(sets, 16) == 4);
    CHECK(bounds(16).first == 4);
}

TEST_CASE("construct_parity: n=4 distinctness, each model owns one pair") {
    const auto bank = construct_parity(4);
    REQUIRE(bank.size() == 6);
    const auto& m01 = bank.at(PairId(0, 1));
    CHECK(m01.side_a == std::vector<ClassId>{0});
    CHECK(m01.side_b == std::vector<ClassId>{1});
    CHECK(m01.label == PairId(0, 1));

    std::vector<SeparableSet> sets;
    for (const auto& [p, m] : bank) {
        CHECK(separates(m, p, 4));
        // the other classes straddle, so only the defining pair is separated
        CHECK(separable_set(m, 4).count() == 1);
        sets.push_back(separable_set(m, 4));
    }
    CHECK(equivalence_classes(sets).size() == 6);
}

TEST_CASE("construct_parity: n=6 gives 15 singleton classes, the upper bound") {
    const auto bank = construct_parity(6);
    REQUIRE(bank.size() == 15);
    std::vector<SeparableSet> sets;
    for (const auto& [p, m] : bank) {
        CHECK(separates(m, p, 6));
        sets.push_back(separable_set(m, 6));
    }
    const auto groups = equivalence_classes(sets);
    CHECK(groups.size() == 15);
    CHECK(groups.size() == bounds(6).second);
    CHECK_THROWS_AS(construct_parity(5), DomainError);
}

TEST_CASE("theorem1_check: hypercube banks and identity bank") {
    {
        const auto r = theorem1_check(bank_sets(hypercube_bank(2), 4));
        CHECK(r.dedup_fundamental_count == 2);
        CHECK(r.exact_cover == 2);
        CHECK(r.agrees);
    }
    {
        SetBank bank;
        for (const PairId& p : all_pairs(3)) bank.emplace(p, set_of(3, {p}));
        const auto r = theorem1_check(bank);
        CHECK(r.dedup_fundamental_count == 3);
        CHECK(r.exact_cover == 3);
        CHECK(r.agrees);
    }
    {
        const auto r = theorem1_check(bank_sets(hypercube_bank(4), 16));
        CHECK(r.dedup_fundamental_count == 4);
        CHECK(r.exact_cover == 4);
        CHECK(r.agrees);
    }
}

TEST_CASE("analyze_bank: parity n=4 report invariants") {
    const auto report = analyze_bank(bank_sets(construct_parity(4), 4), 4);
    CHECK(report.equivalence_classes.size() == 6);
    CHECK(report.lower_bound == 2);
    CHECK(report.upper_bound == 6);
    REQUIRE(report.fundamental_number.has_value());
    CHECK(*report.fundamental_number >= report.lower_bound);
    CHECK(*report.fundamental_number <= report.upper_bound);
}

TEST_CASE("to_dot: emits nodes and edges for a small bank") {
    const auto bank = bank_sets(hypercube_bank(2), 4);
    const auto report = analyze_bank(bank, 4);
    const auto dot = to_dot(report, bank);
    CHECK(dot.find("digraph hasse {") == 0);
    CHECK(dot.find("c0") != std::string::npos);
    CHECK(dot.find("fillcolor") != std::string::npos);
    CHECK(dot.back() == '\n');
}
