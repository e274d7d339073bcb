#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <set>

#include "csergo/dsc.hpp"
#include "csergo/kernel.hpp"
#include "csergo/spectral.hpp"
#include "support.hpp"

using namespace csergo;

namespace {

struct ToyPack {
    ConcurrentSystem sys = csergo::testing::toy();
    Spectrum spec = compute_spectrum(sys);
    SystemMobius h = system_mobius_transform(sys, spec.prob_valuation);
    DscGraph dsc = build_dsc(sys);
};

int clique_ordinal(const ConcurrentSystem& sys, const std::string& letters) {
    Clique c;
    for (char ch : letters) c = c.with(sys.alphabet().letter_index(std::string(1, ch)));
    return sys.alphabet().clique_index(c);
}

std::set<std::string> unstable_names(const ConcurrentSystem& sys, const DscGraph& dsc) {
    std::set<std::string> out;
    for (int v = 0; v < dsc.size(); ++v)
        if (!dsc.stable[v]) {
            const auto [st, ci] = dsc.vertices[v];
            out.insert(sys.state_name(st) + "," +
                       sys.alphabet().clique_name(sys.alphabet().cliques()[ci]));
        }
    return out;
}

}  // namespace

TEST_CASE("dsc construction") {
    ToyPack toy;
    CHECK(toy.dsc.size() == 10);

    ConcurrentSystem dimer = csergo::testing::dimer();
    DscGraph ddsc = build_dsc(dimer);
    CHECK(ddsc.size() == 7);
    int a = ddsc.find(0, clique_ordinal(dimer, "a"));
    REQUIRE(a >= 0);
    CHECK(std::find(ddsc.succ[a].begin(), ddsc.succ[a].end(), a) != ddsc.succ[a].end());

    // over a singleton state the DSC collapses to the clique digraph
    CliqueDigraph cg = clique_digraph(dimer.alphabet());
    REQUIRE(cg.vertices.size() == static_cast<std::size_t>(ddsc.size()));
    for (int v = 0; v < ddsc.size(); ++v) {
        REQUIRE(dimer.alphabet().cliques()[ddsc.vertices[v].clique] == cg.vertices[v]);
        std::vector<int> expected = cg.successors[v];
        std::sort(expected.begin(), expected.end());
        CHECK(ddsc.succ[v] == expected);
    }

    // every state of the cyclic-heap system contributes its enabled cliques
    ConcurrentSystem cyc = csergo::testing::cyc6();
    DscGraph cdsc = build_dsc(cyc);
    CHECK(cdsc.size() == 33);
    int pair_states = 0, singleton_states = 0;
    for (int st = 0; st < cyc.n_states(); ++st) {
        int enabled = 0;
        for (int v = 0; v < cdsc.size(); ++v)
            if (cdsc.vertices[v].state == st) ++enabled;
        if (enabled == 3) ++pair_states;
        if (enabled == 1) ++singleton_states;
    }
    CHECK(pair_states == 9);
    CHECK(singleton_states == 6);
}

TEST_CASE("stability classification") {
    ToyPack toy;
    classify_stable(toy.dsc, toy.h);
    CHECK(unstable_names(toy.sys, toy.dsc) == std::set<std::string>{"0,a", "1,a"});
    CHECK(std::count(toy.dsc.stable.begin(), toy.dsc.stable.end(), 1) == 8);

    ConcurrentSystem dimer = csergo::testing::dimer();
    Spectrum dspec = compute_spectrum(dimer);
    SystemMobius dh = system_mobius_transform(dimer, dspec.prob_valuation);
    DscGraph ddsc = build_dsc(dimer);
    classify_stable(ddsc, dh);
    CHECK(std::count(ddsc.stable.begin(), ddsc.stable.end(), 1) == 7);

    // cyclic-heap system: only the full enabled-letter clique is stable
    ConcurrentSystem cyc = csergo::testing::cyc6();
    Spectrum cspec = compute_spectrum(cyc);
    SystemMobius ch = system_mobius_transform(cyc, cspec.prob_valuation);
    DscGraph cdsc = build_dsc(cyc);
    classify_stable(cdsc, ch);
    for (int st = 0; st < cyc.n_states(); ++st) {
        Clique full;
        for (int l = 0; l < cyc.n_letters(); ++l)
            if (cyc.defined(st, l)) full = full.with(l);
        for (int v = 0; v < cdsc.size(); ++v) {
            if (cdsc.vertices[v].state != st) continue;
            bool is_full = cyc.alphabet().cliques()[cdsc.vertices[v].clique] == full;
            CHECK(static_cast<bool>(cdsc.stable[v]) == is_full);
        }
    }
}

TEST_CASE("stable set is predecessor closed and block triangular") {
    for (const ConcurrentSystem& sys :
         {csergo::testing::toy(), csergo::testing::dimer(), csergo::testing::cyc6(),
          csergo::testing::phil(4), csergo::testing::phil(5), csergo::testing::free_wrap(3)}) {
        Spectrum spec = compute_spectrum(sys);
        SystemMobius h = system_mobius_transform(sys, spec.prob_valuation);
        DscGraph dsc = build_dsc(sys);
        classify_stable(dsc, h);  // throws on a closure violation
        Eigen::MatrixXd f = f_matrix(sys, dsc, spec.rho);
        for (int i = 0; i < dsc.size(); ++i)
            for (int j = 0; j < dsc.size(); ++j)
                if (!dsc.stable[i] && dsc.stable[j]) CHECK(f(i, j) == 0.0);

        // the stable block sits at spectral radius 1, the rest strictly below
        Condensation cond = condense(dsc, f);
        CHECK(cond.max_radius == Catch::Approx(1.0).margin(1e-6));
        CHECK(cond.f0_radius < 1.0 - 1e-6);
    }
}

TEST_CASE("protection search") {
    ConcurrentSystem toy = csergo::testing::toy();
    const Alphabet& alph = toy.alphabet();
    Clique a = Clique().with(alph.letter_index("a"));
    Clique b = Clique().with(alph.letter_index("b"));
    Clique ab = a.united(b);

    auto found = protection_search(toy, 0, b, 8);
    CHECK(found.status == ProtectionStatus::Found);
    REQUIRE(found.certificate);
    CHECK(found.certificate->first_clique() == b);

    auto none = protection_search(toy, 0, a, 12);
    CHECK(none.status == ProtectionStatus::Inconclusive);  // a^n forever extendable
    CHECK_FALSE(none.certificate);

    // a maximal clique protects itself
    auto self = protection_search(toy, 0, ab, 2);
    CHECK(self.status == ProtectionStatus::Found);
    CHECK(self.certificate->height() == 1);
    CHECK(self.certificate->first_clique() == ab);

    CHECK_THROWS_AS(protection_search(toy, 0, b, 13), BudgetExceeded);
}

TEST_CASE("condensation and umbrella structure") {
    ToyPack toy;
    classify_stable(toy.dsc, toy.h);
    Eigen::MatrixXd f = f_matrix(toy.sys, toy.dsc, toy.spec.rho);
    Condensation cond = condense(toy.dsc, f);
    int basic_count = 0;
    for (const auto& comp : cond.components)
        if (comp.basic) {
            ++basic_count;
            CHECK(comp.vertices.size() == 6);
        }
    CHECK(basic_count == 1);
    CHECK(cond.umbrella);
    CHECK(cond.max_radius == Catch::Approx(1.0).margin(1e-6));
    CHECK(cond.f0_radius == Catch::Approx(0.5).margin(1e-6));  // the 2-cycle (0,a) <-> (1,a)

    // cyclic-heap system: two basic components, actual cycles of lengths 3 and 6
    ConcurrentSystem cyc = csergo::testing::cyc6();
    Spectrum cspec = compute_spectrum(cyc);
    SystemMobius ch = system_mobius_transform(cyc, cspec.prob_valuation);
    DscGraph cdsc = build_dsc(cyc);
    classify_stable(cdsc, ch);
    Condensation ccond = condense(cdsc, f_matrix(cyc, cdsc, cspec.rho));
    std::multiset<std::size_t> sizes;
    for (const auto& comp : ccond.components)
        if (comp.basic) {
            sizes.insert(comp.vertices.size());
            for (int v : comp.vertices) {
                int within = 0;
                for (int w : cdsc.succ[v])
                    if (ccond.comp_of[w] == ccond.comp_of[v]) ++within;
                CHECK(within == 1);  // plain cycle
            }
        }
    CHECK(sizes == std::multiset<std::size_t>{3, 6});

    // free wrap: strongly connected, basic = final = everything
    ConcurrentSystem free3 = csergo::testing::free_wrap(3);
    Spectrum fspec = compute_spectrum(free3);
    SystemMobius fh = system_mobius_transform(free3, fspec.prob_valuation);
    DscGraph fdsc = build_dsc(free3);
    classify_stable(fdsc, fh);
    Condensation fcond = condense(fdsc, f_matrix(free3, fdsc, fspec.rho));
    REQUIRE(fcond.components.size() == 1);
    CHECK(fcond.components[0].basic);
    CHECK(fcond.components[0].final);
}

TEST_CASE("power iteration agrees with dense eigenvalues") {
    for (const ConcurrentSystem& sys :
         {csergo::testing::toy(), csergo::testing::cyc6(), csergo::testing::phil(4)}) {
        Spectrum spec = compute_spectrum(sys);
        DscGraph dsc = build_dsc(sys);
        Eigen::MatrixXd f = f_matrix(sys, dsc, spec.rho);
        Eigen::EigenSolver<Eigen::MatrixXd> es(f, false);
        double dense = 0.0;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            dense = std::max(dense, std::abs(es.eigenvalues()[i]));
        CHECK(spectral_radius(f) == Catch::Approx(dense).margin(1e-5));
    }
}

TEST_CASE("invariant vector of F") {
    ToyPack toy;
    classify_stable(toy.dsc, toy.h);
    Eigen::MatrixXd f = f_matrix(toy.sys, toy.dsc, toy.spec.rho);
    auto report = f_invariant_vector_check(toy.dsc, f, toy.spec.U, toy.h);
    CHECK(report.pass());
    CHECK(report.residual <= 1e-9);
    CHECK(report.max_u_unstable <= 1e-12);

    ConcurrentSystem dimer = csergo::testing::dimer();
    Spectrum dspec = compute_spectrum(dimer);
    SystemMobius dh = system_mobius_transform(dimer, dspec.prob_valuation);
    DscGraph ddsc = build_dsc(dimer);
    classify_stable(ddsc, dh);
    CHECK(f_invariant_vector_check(ddsc, f_matrix(dimer, ddsc, dspec.rho), dspec.U, dh).pass());

    // an all-zero transform is not invariant in the positive sense
    SystemMobius zero = toy.h;
    std::fill(zero.h.begin(), zero.h.end(), 0.0);
    auto bad = f_invariant_vector_check(toy.dsc, f, toy.spec.U, zero);
    CHECK_FALSE(bad.pass());
}

TEST_CASE("dot export") {
    ToyPack toy;
    classify_stable(toy.dsc, toy.h);
    Eigen::MatrixXd f = f_matrix(toy.sys, toy.dsc, toy.spec.rho);
    Condensation cond = condense(toy.dsc, f);
    std::string dot = to_dot(toy.sys, toy.dsc, &cond);
    CHECK(dot == to_dot(toy.sys, toy.dsc, &cond));  // byte-stable
    CHECK(std::count(dot.begin(), dot.end(), '{') >= 2);  // digraph plus one cluster
    std::size_t dashed = 0;
    for (std::size_t pos = 0; (pos = dot.find("style=dashed", pos)) != std::string::npos; ++pos)
        ++dashed;
    CHECK(dashed == 2);

    DscGraph empty;
    ConcurrentSystem trivial = wrap_monoid(Alphabet());
    CHECK(to_dot(trivial, empty) == "digraph dsc {\n  node [shape=box];\n}\n");

    // the cyclic-heap export clusters both basic components
    ConcurrentSystem cyc = csergo::testing::cyc6();
    Spectrum cspec = compute_spectrum(cyc);
    SystemMobius ch = system_mobius_transform(cyc, cspec.prob_valuation);
    DscGraph cdsc = build_dsc(cyc);
    classify_stable(cdsc, ch);
    Condensation ccond = condense(cdsc, f_matrix(cyc, cdsc, cspec.rho));
    std::string cdot = to_dot(cyc, cdsc, &ccond);
    std::size_t clusters = 0;
    for (std::size_t pos = 0; (pos = cdot.find("subgraph cluster_", pos)) != std::string::npos;
         ++pos)
        ++clusters;
    CHECK(clusters == 2);
}
