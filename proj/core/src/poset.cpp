#include "sepkit/poset.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace sepkit {

SeparableSet::SeparableSet(std::size_t width)
    : width_(width), words_((width + 63) / 64, 0) {}

bool SeparableSet::test(std::size_t i) const {
    if (i >= width_) throw DomainError("SeparableSet::test: index out of range");
    return (words_[i / 64] >> (i % 64)) & 1u;
}

void SeparableSet::set(std::size_t i) {
    if (i >= width_) throw DomainError("SeparableSet::set: index out of range");
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
}

std::size_t SeparableSet::count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool SeparableSet::subset_of(const SeparableSet& other) const {
    if (width_ != other.width_) throw DomainError("SeparableSet: width mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i]) return false;
    return true;
}

namespace {

std::vector<ClassId> sorted_unique(std::vector<ClassId> v, const char* what) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
        throw DomainError(std::string("AbstractModel: duplicate class in ") + what);
    return v;
}

bool contains(const std::vector<ClassId>& v, ClassId c) {
    return std::binary_search(v.begin(), v.end(), c);
}

}  // namespace

AbstractModel AbstractModel::make(std::vector<ClassId> a, std::vector<ClassId> b,
                                  std::optional<PairId> label) {
    AbstractModel m;
    m.side_a = sorted_unique(std::move(a), "side_a");
    m.side_b = sorted_unique(std::move(b), "side_b");
    for (ClassId c : m.side_a)
        if (contains(m.side_b, c))
            throw DomainError("AbstractModel: sides must be disjoint");
    if (label) {
        const bool split = (contains(m.side_a, label->lo) && contains(m.side_b, label->hi)) ||
                           (contains(m.side_a, label->hi) && contains(m.side_b, label->lo));
        if (!split) throw DomainError("AbstractModel: label pair must straddle the sides");
        m.label = label;
    }
    return m;
}

bool AbstractModel::in_side_a(ClassId c) const { return contains(side_a, c); }
bool AbstractModel::in_side_b(ClassId c) const { return contains(side_b, c); }

bool separates(const AbstractModel& m, const PairId& p) {
    return (m.in_side_a(p.lo) && m.in_side_b(p.hi)) ||
           (m.in_side_a(p.hi) && m.in_side_b(p.lo));
}

bool separates(const AbstractModel& m, const PairId& p, std::size_t n) {
    if (p.hi >= n) throw DomainError("separates: class id out of range");
    return separates(m, p);
}

SeparableSet separable_set(const AbstractModel& m, std::size_t n) {
    for (ClassId c : m.side_a)
        if (c >= n) throw DomainError("separable_set: side_a class out of range");
    for (ClassId c : m.side_b)
        if (c >= n) throw DomainError("separable_set: side_b class out of range");
    SeparableSet s(pair_count(n));
    for (ClassId a : m.side_a)
        for (ClassId b : m.side_b) s.set(pair_index(PairId(a, b), n));
    return s;
}

bool leq(const SeparableSet& m1, const SeparableSet& m2) { return m1.subset_of(m2); }

bool equivalent(const SeparableSet& m1, const SeparableSet& m2) {
    if (m1.width() != m2.width()) throw DomainError("equivalent: width mismatch");
    return m1 == m2;
}

std::vector<std::vector<std::size_t>> equivalence_classes(std::span<const SeparableSet> sets) {
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        bool placed = false;
        for (auto& g : groups) {
            if (sets[g.front()] == sets[i]) {
                if (sets[g.front()].width() != sets[i].width())
                    throw DomainError("equivalence_classes: width mismatch");
                g.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) {
            if (!groups.empty() && sets[groups.front().front()].width() != sets[i].width())
                throw DomainError("equivalence_classes: width mismatch");
            groups.push_back({i});
        }
    }
    return groups;
}

HasseDiagram hasse_diagram(std::span<const SeparableSet> sets) {
    HasseDiagram h;
    h.classes = equivalence_classes(sets);
    const std::size_t m = h.classes.size();

    // strict order on representatives
    std::vector<std::vector<bool>> below(m, std::vector<bool>(m, false));
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = 0; v < m; ++v)
            if (u != v) {
                const auto& su = sets[h.classes[u].front()];
                const auto& sv = sets[h.classes[v].front()];
                below[u][v] = leq(sv, su) && !(sv == su);
            }

    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = 0; v < m; ++v)
            if (below[u][v]) {
                bool covering = true;
                for (std::size_t w = 0; w < m && covering; ++w)
                    if (below[u][w] && below[w][v]) covering = false;
                if (covering) h.edges.emplace_back(u, v);
            }

    for (std::size_t v = 0; v < m; ++v) {
        bool is_max = true;
        for (std::size_t u = 0; u < m && is_max; ++u)
            if (below[u][v]) is_max = false;
        if (is_max) h.maximal.push_back(v);
    }
    return h;
}

SetBank bank_sets(const ModelBank& bank, std::size_t n) {
    SetBank out;
    for (const auto& [p, m] : bank) out.emplace(p, separable_set(m, n));
    return out;
}

std::vector<PairId> fundamental_pairs(const SetBank& bank) {
    if (bank.empty()) return {};
    const std::size_t width = bank.begin()->second.width();
    // width = C(n,2) determines n
    std::size_t n = 2;
    while (pair_count(n) < width) ++n;
    if (pair_count(n) != width) throw DomainError("fundamental_pairs: inconsistent bank width");
    if (bank.size() != pair_count(n))
        throw DomainError("fundamental_pairs: bank must contain every pair");
    for (const auto& [p, s] : bank)
        if (!s.test(pair_index(p, n)))
            throw DomainError("fundamental_pairs: head does not separate its own pair");

    std::vector<PairId> out;
    for (const auto& [p, sp] : bank) {
        const std::size_t idx = pair_index(p, n);
        bool fundamental = true;
        for (const auto& [q, sq] : bank) {
            if (sq.test(idx) && !(sq == sp)) {
                fundamental = false;
                break;
            }
        }
        if (fundamental) out.push_back(p);
    }
    return out;
}

namespace {

struct CoverInstance {
    std::vector<SeparableSet> reps;  // equivalence-deduped, original order
    std::size_t universe = 0;
};

CoverInstance dedup_and_check(const std::vector<SeparableSet>& sets, std::size_t n) {
    if (n < 2) throw DomainError("set cover: need n >= 2");
    CoverInstance inst;
    inst.universe = pair_count(n);
    for (const auto& s : sets) {
        if (s.width() != inst.universe)
            throw DomainError("set cover: set width does not match pair count");
        if (std::find(inst.reps.begin(), inst.reps.end(), s) == inst.reps.end())
            inst.reps.push_back(s);
    }
    // union must cover every pair
    SeparableSet all(inst.universe);
    for (const auto& s : inst.reps)
        for (std::size_t i = 0; i < inst.universe; ++i)
            if (s.test(i)) all.set(i);
    for (std::size_t i = 0; i < inst.universe; ++i)
        if (!all.test(i)) {
            const PairId p = pair_from_index(i, n);
            std::ostringstream os;
            os << "pair (" << p.lo << "," << p.hi << ") is not separable by any model";
            throw DomainError(os.str());
        }
    return inst;
}

struct BranchState {
    const std::vector<SeparableSet>* reps;
    std::size_t universe;
    std::uint64_t nodes = 0;
    std::uint64_t budget;
    std::size_t best;
};

void branch(BranchState& st, std::vector<bool>& covered, std::size_t uncovered,
            std::size_t chosen) {
    if (uncovered == 0) {
        st.best = std::min(st.best, chosen);
        return;
    }
    if (++st.nodes > st.budget)
        throw BudgetError("fundamental_number_exact: search budget exceeded; use the greedy bound");

    // bound: ceil(uncovered / max coverage of any remaining set)
    std::size_t max_cov = 0;
    for (const auto& s : *st.reps) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < st.universe; ++i)
            if (!covered[i] && s.test(i)) ++c;
        max_cov = std::max(max_cov, c);
    }
    if (max_cov == 0) return;  // cannot finish on this path
    if (chosen + (uncovered + max_cov - 1) / max_cov >= st.best) return;

    // branch on the uncovered pair with the fewest covering sets
    std::size_t pick = st.universe;
    std::size_t pick_deg = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < st.universe; ++i) {
        if (covered[i]) continue;
        std::size_t deg = 0;
        for (const auto& s : *st.reps)
            if (s.test(i)) ++deg;
        if (deg < pick_deg) {
            pick_deg = deg;
            pick = i;
        }
    }

    for (std::size_t si = 0; si < st.reps->size(); ++si) {
        const auto& s = (*st.reps)[si];
        if (!s.test(pick)) continue;
        std::vector<std::size_t> newly;
        for (std::size_t i = 0; i < st.universe; ++i)
            if (!covered[i] && s.test(i)) {
                covered[i] = true;
                newly.push_back(i);
            }
        branch(st, covered, uncovered - newly.size(), chosen + 1);
        for (std::size_t i : newly) covered[i] = false;
    }
}

}  // namespace

std::size_t fundamental_number_exact(const std::vector<SeparableSet>& sets, std::size_t n,
                                     const CoverOptions& opts) {
    CoverInstance inst = dedup_and_check(sets, n);
    if (inst.reps.size() > opts.max_candidates)
        throw BudgetError("fundamental_number_exact: too many candidate sets after dedup; "
                          "use the greedy bound");
    // greedy incumbent keeps the search shallow
    std::size_t incumbent = fundamental_number_greedy(sets, n);

    BranchState st{&inst.reps, inst.universe, 0, opts.node_budget, incumbent};
    std::vector<bool> covered(inst.universe, false);
    branch(st, covered, inst.universe, 0);
    return st.best;
}

std::size_t fundamental_number_greedy(const std::vector<SeparableSet>& sets, std::size_t n) {
    CoverInstance inst = dedup_and_check(sets, n);
    std::vector<bool> covered(inst.universe, false);
    std::size_t uncovered = inst.universe;
    std::size_t picks = 0;
    while (uncovered > 0) {
        std::size_t best_i = inst.reps.size();
        std::size_t best_gain = 0;
        for (std::size_t i = 0; i < inst.reps.size(); ++i) {
            std::size_t gain = 0;
            for (std::size_t b = 0; b < inst.universe; ++b)
                if (!covered[b] && inst.reps[i].test(b)) ++gain;
            if (gain > best_gain) {  // ties keep the lowest index
                best_gain = gain;
                best_i = i;
            }
        }
        for (std::size_t b = 0; b < inst.universe; ++b)
            if (!covered[b] && inst.reps[best_i].test(b)) {
                covered[b] = true;
                --uncovered;
            }
        ++picks;
    }
    return picks;
}

std::pair<std::size_t, std::size_t> bounds(std::size_t n) {
    if (n < 2) throw DomainError("bounds: need n >= 2");
    std::size_t lower = 0;
    std::size_t cap = 1;
    while (cap < n) {
        cap *= 2;
        ++lower;
    }
    return {lower, pair_count(n)};
}

std::vector<AbstractModel> construct_hypercube(std::size_t k) {
    if (k < 1) throw DomainError("construct_hypercube: need k >= 1");
    if (k > 20) throw DomainError("construct_hypercube: k too large for pair bit vector");
    const std::size_t n = std::size_t{1} << k;
    std::vector<AbstractModel> models;
    models.reserve(k);
    for (std::size_t bit = 0; bit < k; ++bit) {
        std::vector<ClassId> a, b;
        for (ClassId c = 0; c < n; ++c)
            ((c >> bit) & 1u ? b : a).push_back(c);
        models.push_back(AbstractModel::make(std::move(a), std::move(b)));
    }
    return models;
}

ModelBank hypercube_bank(std::size_t k) {
    const auto models = construct_hypercube(k);
    const std::size_t n = std::size_t{1} << k;
    ModelBank bank;
    for (const PairId& p : all_pairs(n)) {
        const std::size_t diff = p.lo ^ p.hi;
        const std::size_t bit = static_cast<std::size_t>(std::countr_zero(diff));
        AbstractModel m = models[bit];
        m.label = p;
        bank.emplace(p, std::move(m));
    }
    return bank;
}

ModelBank construct_parity(std::size_t n) {
    if (n < 4 || n % 2 != 0) throw DomainError("construct_parity: need even n >= 4");
    ModelBank bank;
    // Each class stands for a block {odd element, even element}; the model for
    // (I, J) commits block I to side a, block J to side b, and splits every
    // remaining block across the bipartition by element parity. A straddling
    // block is unassigned at class level, so the model separates exactly its
    // defining pair and all C(n,2) models are pairwise non-equivalent.
    for (const PairId& p : all_pairs(n)) {
        bank.emplace(p, AbstractModel::make({p.lo}, {p.hi}, p));
    }
    return bank;
}

Theorem1Check theorem1_check(const SetBank& bank, const CoverOptions& opts) {
    Theorem1Check out;
    const auto fp = fundamental_pairs(bank);
    // collapse fundamental pairs whose heads share a separable set
    std::vector<SeparableSet> distinct;
    for (const PairId& p : fp) {
        const auto& s = bank.at(p);
        if (std::find(distinct.begin(), distinct.end(), s) == distinct.end())
            distinct.push_back(s);
    }
    out.dedup_fundamental_count = distinct.size();

    std::vector<SeparableSet> sets;
    sets.reserve(bank.size());
    for (const auto& [p, s] : bank) sets.push_back(s);
    std::size_t n = 2;
    while (pair_count(n) < sets.front().width()) ++n;
    out.exact_cover = fundamental_number_exact(sets, n, opts);
    out.agrees = out.dedup_fundamental_count == out.exact_cover;
    return out;
}

PosetReport analyze_bank(const SetBank& bank, std::size_t n, const CoverOptions& opts) {
    if (bank.empty()) throw DomainError("analyze_bank: empty bank");
    PosetReport report;
    report.n = n;
    std::vector<SeparableSet> sets;
    sets.reserve(bank.size());
    for (const auto& [p, s] : bank) {
        if (s.width() != pair_count(n)) throw DomainError("analyze_bank: width mismatch");
        sets.push_back(s);
    }
    HasseDiagram h = hasse_diagram(sets);
    report.equivalence_classes = std::move(h.classes);
    report.hasse_edges = std::move(h.edges);
    report.maximal = std::move(h.maximal);
    if (bank.size() == pair_count(n)) report.fundamental_pairs = fundamental_pairs(bank);
    const auto [lo, hi] = bounds(n);
    report.lower_bound = lo;
    report.upper_bound = hi;
    try {
        report.fundamental_number = fundamental_number_exact(sets, n, opts);
    } catch (const BudgetError&) {
        // left unknown; the greedy CLI path covers large instances
    } catch (const DomainError&) {
        // bank does not cover all pairs; fundamental number undefined here
    }
    return report;
}

PosetReport analyze_sets(const std::vector<SeparableSet>& sets, std::size_t n,
                         const CoverOptions& opts) {
    if (sets.empty()) throw DomainError("analyze_sets: empty model list");
    PosetReport report;
    report.n = n;
    for (const auto& s : sets)
        if (s.width() != pair_count(n)) throw DomainError("analyze_sets: width mismatch");
    HasseDiagram h = hasse_diagram(sets);
    report.equivalence_classes = std::move(h.classes);
    report.hasse_edges = std::move(h.edges);
    report.maximal = std::move(h.maximal);
    const auto [lo, hi] = bounds(n);
    report.lower_bound = lo;
    report.upper_bound = hi;
    try {
        report.fundamental_number = fundamental_number_exact(sets, n, opts);
    } catch (const BudgetError&) {
    } catch (const DomainError&) {
    }
    return report;
}

namespace {

std::string pair_label(const PairId& p, const std::vector<std::string>& names) {
    std::ostringstream os;
    if (p.lo < names.size() && p.hi < names.size())
        os << names[p.lo] << "/" << names[p.hi];
    else
        os << p.lo << "/" << p.hi;
    return os.str();
}

}  // namespace

std::string to_dot(const PosetReport& report, const SetBank& bank,
                   const std::vector<std::string>& class_names) {
    std::vector<PairId> pairs;
    pairs.reserve(bank.size());
    for (const auto& [p, s] : bank) pairs.push_back(p);

    std::ostringstream os;
    os << "digraph hasse {\n";
    os << "  rankdir=TB;\n";
    os << "  node [shape=ellipse];\n";
    std::vector<bool> is_max(report.equivalence_classes.size(), false);
    for (std::size_t m : report.maximal) is_max[m] = true;
    for (std::size_t c = 0; c < report.equivalence_classes.size(); ++c) {
        os << "  c" << c << " [label=\"";
        bool first = true;
        for (std::size_t idx : report.equivalence_classes[c]) {
            if (!first) os << "\\n";
            first = false;
            if (idx < pairs.size())
                os << pair_label(pairs[idx], class_names);
            else
                os << "m" << idx;
        }
        os << "\"";
        if (is_max[c]) os << ", style=filled, fillcolor=lightblue";
        os << "];\n";
    }
    for (const auto& [u, v] : report.hasse_edges)
        os << "  c" << u << " -> c" << v << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace sepkit
