// Prints one pass/fail line per acceptance criterion and exits non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "menger/claims.hpp"

using namespace menger;

namespace {

struct Limit {
    double total_s;      // wall time for the whole criterion, <= 0 for none
    double per_claim_s;  // wall time for each claim, <= 0 for none
};

const std::map<int, Limit> kLimits{{1, {1.0, 0}}, {2, {5.0, 0}}, {3, {1.0, 0}},  {4, {0, 10.0}}, {5, {0, 60.0}},
                                   {6, {600.0, 0}}, {7, {0, 0}}, {8, {5.0, 0}}, {9, {10.0, 0}}, {10, {0, 0}}};

const std::map<int, std::string> kTitles{
    {1, "circumradius forms agree"},      {2, "one-dimensional integrals"},
    {3, "line distance bound"},                {4, "U_p(E) below 6/(1-p)"},
    {5, "I_p(E) below its closed form"},  {6, "M_2(E), F_2(E1,E1,E2) and their decomposition"},
    {7, "divergence at the thresholds"},  {8, "exact checks on the set F"},
    {9, "tangent classification"},        {10, "energy inequalities"}};

}  // namespace

int main() {
    VerifyOptions opt;
    const auto rep = run_verify(opt);

    std::map<int, std::vector<const ClaimRecord*>> by;
    for (const auto& c : rep.claims) by[c.criterion].push_back(&c);

    // low-budget preset for the triple integral: same verdicts, < 60 s, <= 10 % error
    VerifyOptions low;
    low.budget = Budget::Low;
    low.cfg = budget_config(Budget::Low);
    low.only = {"M_E_bound", "M_E_decomposition", "F_E1E1E2_bound"};
    const auto t0 = std::chrono::steady_clock::now();
    const auto low_rep = run_verify(low);
    const double low_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool all = true;
    for (int k = 1; k <= 10; ++k) {
        const auto& claims = by[k];
        const Limit lim = kLimits.at(k);
        bool ok = !claims.empty();
        double total = 0.0, slowest = 0.0;
        std::string failing;
        for (const auto* c : claims) {
            total += c->runtime_s;
            slowest = std::max(slowest, c->runtime_s);
            if (!c->pass) {
                ok = false;
                failing += " " + c->id;
            }
        }
        std::string timing;
        char buf[128];
        if (lim.total_s > 0) {
            std::snprintf(buf, sizeof buf, " runtime %.2fs (limit %.0fs)", total, lim.total_s);
            if (total >= lim.total_s) ok = false, failing += " runtime";
        } else if (lim.per_claim_s > 0) {
            std::snprintf(buf, sizeof buf, " slowest claim %.2fs (limit %.0fs)", slowest, lim.per_claim_s);
            if (slowest >= lim.per_claim_s) ok = false, failing += " runtime";
        } else {
            std::snprintf(buf, sizeof buf, " runtime %.2fs", total);
        }
        timing = buf;
        if (k == 6) {
            bool low_ok = low_rep.all_pass() && low_s < 60.0;
            for (const auto& c : low_rep.claims)
                if (c.id == "M_E_bound") low_ok = low_ok && c.error_bound <= 0.10 * c.value;
            std::snprintf(buf, sizeof buf, "; low budget %.2fs %s", low_s, low_ok ? "ok" : "failed");
            timing += buf;
            if (!low_ok) ok = false, failing += " low_budget";
        }
        all = all && ok;
        std::cout << "criterion " << k << ": " << (ok ? "PASS" : "FAIL") << "  " << kTitles.at(k) << " ["
                  << claims.size() << " claims," << timing << "]";
        if (!failing.empty()) std::cout << " failing:" << failing;
        std::cout << "\n";
    }
    std::cout << (all ? "all criteria pass" : "some criteria fail") << "\n";
    return all ? 0 : 1;
}
