#include "imc/classify.hpp"

#include <algorithm>
#include <deque>

#include "imc/operators.hpp"

namespace imc {

namespace {

std::vector<int> mask_to_list(const std::vector<char>& mask, bool value = true) {
    std::vector<int> out;
    for (std::size_t x = 0; x < mask.size(); ++x)
        if (static_cast<bool>(mask[x]) == value) out.push_back(static_cast<int>(x));
    return out;
}

/// States that can reach `seeds` in >= 1 step along possible-support edges.
std::vector<char> can_reach(const ImpreciseChain& chain, const std::vector<char>& seeds) {
    const int k = chain.size();
    std::vector<std::vector<int>> predecessors(static_cast<std::size_t>(k));
    for (int x = 0; x < k; ++x)
        for (int y : possible_support(chain, x)) predecessors[y].push_back(x);

    std::vector<char> reached(static_cast<std::size_t>(k), 0);
    std::deque<int> queue;
    for (int y = 0; y < k; ++y)
        if (seeds[y]) queue.push_back(y);
    while (!queue.empty()) {
        const int y = queue.front();
        queue.pop_front();
        for (int x : predecessors[y]) {
            if (!reached[x]) {
                reached[x] = 1;
                queue.push_back(x);
            }
        }
    }
    return reached;
}

/// Zero set of the iterates v_0 = I_A, v_{n+1} = lower(T) v_n on an A-inert
/// chain. The iterates are non-decreasing, so the zero set shrinks and
/// stabilizes within k sweeps; once stable for one sweep it is stable
/// forever.
std::vector<char> lower_unreachable_mask(const ImpreciseChain& inert, const TargetSet& A) {
    const int k = inert.size();
    ExtVector v(static_cast<std::size_t>(k), ExtValue(0.0));
    for (int a : A.members()) v[a] = ExtValue(1.0);

    auto zero_set = [&](const ExtVector& f) {
        std::vector<char> z(static_cast<std::size_t>(k), 0);
        for (int x = 0; x < k; ++x) z[x] = f[x].finite() == 0.0 ? 1 : 0;
        return z;
    };

    std::vector<char> zeros = zero_set(v);
    for (int sweep = 0; sweep <= k; ++sweep) {
        v = lower_transition_apply(inert, v);
        std::vector<char> next = zero_set(v);
        if (next == zeros) break;
        zeros = std::move(next);
    }
    return zeros;
}

}  // namespace

ImpreciseChain a_inert_modification(const ImpreciseChain& chain, const TargetSet& A) {
    ImpreciseChain out = chain;
    const int k = chain.size();
    for (int a : A.members()) {
        ProbabilityRow self;
        self.mass.assign(static_cast<std::size_t>(k), 0.0);
        self.mass[a] = 1.0;
        out.rows[a] = VertexListRow{{self}};
    }
    return out;
}

std::vector<int> almost_sure_reach_region(const ImpreciseChain& chain, const TargetSet& A) {
    const int k = chain.size();
    std::vector<char> region(static_cast<std::size_t>(k), 1);

    while (true) {
        // Least fixed point inside the candidate region: states with some
        // row supported in the region that moves toward the current P.
        std::vector<char> p(static_cast<std::size_t>(k), 0);
        for (int a : A.members()) p[a] = region[a];
        bool grew = true;
        while (grew) {
            grew = false;
            for (int x = 0; x < k; ++x) {
                if (p[x] || !region[x]) continue;
                if (row_exists_supported(chain.rows[x], region, p)) {
                    p[x] = 1;
                    grew = true;
                }
            }
        }
        if (p == region) break;
        region = std::move(p);
    }
    return mask_to_list(region);
}

ClassificationReport classify_states(const ImpreciseChain& chain, const TargetSet& A) {
    const int k = chain.size();
    const ImpreciseChain inert = a_inert_modification(chain, A);

    ClassificationReport report;

    std::vector<char> b_mask = lower_unreachable_mask(inert, A);
    for (int a : A.members()) b_mask[a] = 0;  // A is never in B
    report.B = mask_to_list(b_mask);

    std::vector<char> u_mask = can_reach(inert, b_mask);
    for (int x = 0; x < k; ++x) u_mask[x] = u_mask[x] && !b_mask[x] && !A.contains(x);
    report.U = mask_to_list(u_mask);

    for (int x = 0; x < k; ++x)
        if (!b_mask[x] && !u_mask[x]) report.Z.push_back(x);

    // C: states of A^c that cannot reach A along possible-support edges.
    // First entry into A does not depend on the rows of A, so the original
    // chain and its modification agree here.
    std::vector<char> a_mask(static_cast<std::size_t>(k), 0);
    for (int a : A.members()) a_mask[a] = 1;
    std::vector<char> reaches_a = can_reach(chain, a_mask);
    for (int x = 0; x < k; ++x)
        if (!A.contains(x) && !reaches_a[x]) report.C.push_back(x);

    report.lower_finite_region = almost_sure_reach_region(chain, A);
    return report;
}

}  // namespace imc
