// The multi-handle-addition certifier: condition (0) is diskbustingness of
// the whole system, conditions (1)..(n-1) ask that smaller subfamilies do
// not bind free factors of prescribed ranks.
//
// "System J binds a rank-m free factor" is certified through Whitehead
// minimization: a minimal system either spans all its support generators
// diskbustingly (then it binds exactly the factor generated by its
// support) or it certifiably binds nothing smaller than asked.  The
// criteria below are sound; where they are not decisive the report says
// Unknown instead of guessing.
#pragma once

#include <functional>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "whitehead.hpp"

namespace heegaard {

enum class BindingStatus { DoesNotBind, Binds, Unknown };

enum class BindingRationale {
    DiskbustingAmbient,       // diskbusting over the full basis: binds rank k only
    SeparableAmbient,         // separable, target is the ambient rank
    SupportDeficit,           // minimized support smaller than the target rank
    SplitSystem,              // minimal system splits into parts with disjoint supports
    DiskbustingOnSupport,     // minimal system diskbusting over its own support
    Inconclusive
};

inline std::string to_string(BindingStatus s) {
    switch (s) {
        case BindingStatus::DoesNotBind: return "does_not_bind";
        case BindingStatus::Binds: return "binds";
        default: return "unknown";
    }
}

inline std::string to_string(BindingRationale r) {
    switch (r) {
        case BindingRationale::DiskbustingAmbient: return "diskbusting_ambient";
        case BindingRationale::SeparableAmbient: return "separable_ambient";
        case BindingRationale::SupportDeficit: return "support_deficit";
        case BindingRationale::SplitSystem: return "split_system";
        case BindingRationale::DiskbustingOnSupport: return "diskbusting_on_support";
        default: return "inconclusive";
    }
}

struct FactorBindingReport {
    int target_rank = 0;
    BindingStatus status = BindingStatus::Unknown;
    BindingRationale rationale = BindingRationale::Inconclusive;
    SeparabilityVerdict separability;     // over the ambient basis
    CurveSystem minimized;                // Whitehead-minimal form (when computed)
    std::vector<std::string> support;     // support of the minimal form
    std::string note;
};

namespace detail {

inline std::vector<std::string> support_names(const CurveSystem& s) {
    std::vector<std::string> out;
    for (int g : support(s)) out.push_back(s.basis.name(g));
    return out;
}

/// Restrict a system to the sub-basis of its support.  Words must not use
/// letters outside the support.
inline CurveSystem restrict_to_support(const CurveSystem& s, const std::vector<int>& gens) {
    std::vector<std::string> names;
    std::vector<int> newidx(static_cast<size_t>(s.basis.rank()), -1);
    for (int g : gens) {
        newidx[static_cast<size_t>(g)] = static_cast<int>(names.size());
        names.push_back(s.basis.name(g));
    }
    Basis sub{names};
    CurveSystem out;
    out.basis = sub;
    out.names = s.names;
    for (const auto& w : s.words) {
        std::vector<Letter> ls;
        for (const Letter& l : w.letters()) {
            int ng = newidx[static_cast<size_t>(l.gen)];
            if (ng < 0) throw std::logic_error("restrict_to_support: stray letter");
            ls.push_back({ng, l.sign});
        }
        out.words.emplace_back(sub, std::move(ls));
    }
    return out;
}

/// Partition the words of a system into groups with pairwise disjoint
/// supports (connected components of the shared-generator relation).
inline std::vector<std::vector<size_t>> support_split(const CurveSystem& s) {
    size_t n = s.words.size();
    std::vector<size_t> parent(n);
    for (size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<size_t(size_t)> find = [&](size_t i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };
    for (int g = 0; g < s.basis.rank(); ++g) {
        std::optional<size_t> first;
        for (size_t i = 0; i < n; ++i) {
            bool uses = false;
            for (const Letter& l : s.words[i].letters())
                if (l.gen == g) { uses = true; break; }
            if (!uses) continue;
            if (!first) first = i;
            parent[find(i)] = find(*first);
        }
    }
    std::map<size_t, std::vector<size_t>> groups;
    for (size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<size_t>> out;
    for (auto& [root, members] : groups) out.push_back(members);
    return out;
}

} // namespace detail

/// Does the system bind a free factor of rank m of the ambient free group?
inline FactorBindingReport binds_free_factor(const CurveSystem& system, int m) {
    int k = system.basis.rank();
    if (m < 1 || m > k)
        throw std::invalid_argument("binds_free_factor: target rank out of range");
    FactorBindingReport rep;
    rep.target_rank = m;
    rep.separability = decide_separability(system);

    if (!rep.separability.separable()) {
        // connected graph over the full basis means every generator occurs,
        // so a diskbusting system binds the ambient factor and nothing else
        rep.status = m == k ? BindingStatus::Binds : BindingStatus::DoesNotBind;
        rep.rationale = BindingRationale::DiskbustingAmbient;
        rep.minimized = rep.separability.terminal;
        rep.support = detail::support_names(rep.minimized);
        return rep;
    }
    if (m == k) {
        // separable = does not bind the ambient free group
        rep.status = BindingStatus::DoesNotBind;
        rep.rationale = BindingRationale::SeparableAmbient;
        rep.minimized = rep.separability.terminal;
        rep.support = detail::support_names(rep.minimized);
        return rep;
    }

    MinimizationResult min = minimize_system(system);
    rep.minimized = min.system;
    std::vector<int> sup = support(min.system);
    rep.support = detail::support_names(min.system);

    if (static_cast<int>(sup.size()) < m) {
        rep.status = BindingStatus::DoesNotBind;
        rep.rationale = BindingRationale::SupportDeficit;
        return rep;
    }

    auto parts = detail::support_split(min.system);
    if (parts.size() >= 2) {
        size_t max_part_support = 0;
        for (const auto& part : parts) {
            CurveSystem sub;
            sub.basis = min.system.basis;
            for (size_t i : part) {
                sub.names.push_back(min.system.names[i]);
                sub.words.push_back(min.system.words[i]);
            }
            max_part_support = std::max(max_part_support, support(sub).size());
        }
        if (static_cast<size_t>(m) > max_part_support) {
            rep.status = BindingStatus::DoesNotBind;
            rep.rationale = BindingRationale::SplitSystem;
            return rep;
        }
        rep.status = BindingStatus::Unknown;
        rep.rationale = BindingRationale::Inconclusive;
        rep.note = "minimal system splits but the target rank does not exceed every part";
        return rep;
    }

    CurveSystem on_support = detail::restrict_to_support(min.system, sup);
    SeparabilityVerdict sv = decide_separability(on_support);
    if (!sv.separable()) {
        rep.status = static_cast<int>(sup.size()) == m ? BindingStatus::Binds
                                                       : BindingStatus::DoesNotBind;
        rep.rationale = BindingRationale::DiskbustingOnSupport;
        return rep;
    }

    rep.status = BindingStatus::Unknown;
    rep.rationale = BindingRationale::Inconclusive;
    rep.note = "minimal system is separable on its own support";
    return rep;
}

// ---- multi-handle addition -----------------------------------------------------

struct SubsetReport {
    std::vector<std::string> curves;  // names, ascending index order
    int p = 0;                        // condition index, subsets have size n-p
    FactorBindingReport binding;
};

enum class MhaOutcome { Pass, Fail, Inconclusive };

struct MhaReport {
    int rank = 0;
    std::vector<std::string> curves;
    SeparabilityVerdict condition0;
    std::vector<SubsetReport> subsets;
    MhaOutcome overall = MhaOutcome::Inconclusive;
    std::string failure;  // which condition/subset failed, empty on Pass

    bool passed() const { return overall == MhaOutcome::Pass; }
};

inline std::string to_string(MhaOutcome o) {
    switch (o) {
        case MhaOutcome::Pass: return "pass";
        case MhaOutcome::Fail: return "fail";
        default: return "inconclusive";
    }
}

namespace detail {

inline void subsets_of_size(size_t n, size_t k, std::vector<std::vector<size_t>>& out) {
    std::vector<size_t> cur;
    std::function<void(size_t)> rec = [&](size_t start) {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (size_t i = start; i + (k - cur.size()) <= n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

} // namespace detail

/// Conditions (0)..(n-1) for adding n 2-handles along the system: the full
/// system must be diskbusting, and for p = 1..n-1 every (n-p)-subset must
/// not bind a rank k-p+1 free factor.  Subsets may be checked in parallel;
/// assembly order is deterministic either way.
inline MhaReport mha_check(const CurveSystem& system, bool parallel = false) {
    if (system.words.empty())
        throw std::invalid_argument("mha_check: empty system");
    MhaReport rep;
    rep.rank = system.basis.rank();
    rep.curves = system.names;
    rep.condition0 = decide_separability(system);

    int n = static_cast<int>(system.words.size());
    int k = system.basis.rank();
    std::vector<std::pair<int, std::vector<size_t>>> jobs;  // (p, subset)
    for (int p = 1; p <= n - 1; ++p) {
        std::vector<std::vector<size_t>> subs;
        detail::subsets_of_size(static_cast<size_t>(n), static_cast<size_t>(n - p), subs);
        for (auto& s : subs) jobs.emplace_back(p, s);
    }

    auto run_job = [&](const std::pair<int, std::vector<size_t>>& job) {
        auto [p, idxs] = job;
        CurveSystem sub;
        sub.basis = system.basis;
        for (size_t i : idxs) {
            sub.names.push_back(system.names[i]);
            sub.words.push_back(system.words[i]);
        }
        SubsetReport sr;
        sr.p = p;
        sr.curves = sub.names;
        sr.binding = binds_free_factor(sub, k - p + 1);
        return sr;
    };

    rep.subsets.resize(jobs.size());
    if (parallel) {
        std::vector<std::future<SubsetReport>> futs;
        for (const auto& job : jobs)
            futs.push_back(std::async(std::launch::async, run_job, job));
        for (size_t i = 0; i < futs.size(); ++i) rep.subsets[i] = futs[i].get();
    } else {
        for (size_t i = 0; i < jobs.size(); ++i) rep.subsets[i] = run_job(jobs[i]);
    }

    if (rep.condition0.separable()) {
        rep.overall = MhaOutcome::Fail;
        rep.failure = "condition 0: system is separable";
        return rep;
    }
    for (const SubsetReport& sr : rep.subsets) {
        if (sr.binding.status == BindingStatus::Binds) {
            rep.overall = MhaOutcome::Fail;
            rep.failure = "condition " + std::to_string(sr.p) + ": subset binds";
            return rep;
        }
    }
    for (const SubsetReport& sr : rep.subsets) {
        if (sr.binding.status == BindingStatus::Unknown) {
            rep.overall = MhaOutcome::Inconclusive;
            rep.failure = "condition " + std::to_string(sr.p) + ": subset undecided";
            return rep;
        }
    }
    rep.overall = MhaOutcome::Pass;
    return rep;
}

} // namespace heegaard
