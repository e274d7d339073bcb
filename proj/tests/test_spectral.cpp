#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "csergo/spectral.hpp"
#include "support.hpp"

using namespace csergo;
using csergo::testing::SystemSampler;

TEST_CASE("characteristic polynomial") {
    ConcurrentSystem toy = csergo::testing::toy();
    RationalPoly theta = char_poly(mobius_matrix(toy));
    // (1 - t^2)(1 - 2t) expanded
    CHECK(theta == RationalPoly({Rational(1), Rational(-2), Rational(-1), Rational(2)}));

    ConcurrentSystem dimer = csergo::testing::dimer();
    CHECK(char_poly(mobius_matrix(dimer)) == mobius_polynomial(dimer.alphabet()));

    // exact determinant agrees with the numeric determinant at a sample point
    ConcurrentSystem phil = csergo::testing::phil(5);
    PolyMatrix<Rational> m = mobius_matrix(phil);
    RationalPoly tp = char_poly(m);
    CHECK(tp.coeff(0) == 1);
    CHECK(std::abs(tp.eval_double(0.1) - m.eval(0.1).determinant()) < 1e-12);
}

TEST_CASE("characteristic root") {
    CHECK(characteristic_root(char_poly(mobius_matrix(csergo::testing::toy()))) ==
          Catch::Approx(0.5).margin(1e-12));
    CHECK(characteristic_root(char_poly(mobius_matrix(csergo::testing::dimer()))) ==
          Catch::Approx(1.0 / 3).margin(1e-12));

    for (int n : {4, 5}) {
        ConcurrentSystem phil = csergo::testing::phil(n);
        double rho = characteristic_root(char_poly(mobius_matrix(phil)));
        double r = smallest_root_monoid(mobius_polynomial(cycle_alphabet(n)));
        CHECK(rho * rho == Catch::Approx(r).margin(1e-9));
    }

    CHECK_THROWS_AS(characteristic_root(RationalPoly({Rational(1)})), NoPositiveRoot);
}

TEST_CASE("kernel vector") {
    ConcurrentSystem toy = csergo::testing::toy();
    PolyMatrix<Rational> m = mobius_matrix(toy);
    Eigen::VectorXd u = kernel_vector(m.eval(0.5));
    REQUIRE(u.size() == 3);
    CHECK(u(0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(u(1) == Catch::Approx(1.0).margin(1e-9));
    CHECK(u(2) == Catch::Approx(2.0).margin(1e-9));

    CHECK(kernel_vector(Eigen::MatrixXd::Zero(1, 1)).size() == 1);

    // away from the root the matrix has full rank
    CHECK_THROWS_AS(kernel_vector(m.eval(0.25)), KernelDimensionNot1);

    ConcurrentSystem phil = csergo::testing::phil(5);
    Spectrum spec = compute_spectrum(phil);
    double r = spec.rho * spec.rho;
    for (int st = 0; st < phil.n_states(); ++st) {
        int size = 0;
        for (char ch : phil.state_name(st)) size += ch == 'a';
        CHECK(spec.U(st) == Catch::Approx(std::pow(r, size / 2.0)).margin(1e-9));
    }
}

TEST_CASE("normalized valuation of the running example") {
    ConcurrentSystem toy = csergo::testing::toy();
    Spectrum spec = compute_spectrum(toy);
    const int nl = toy.n_letters();
    auto val = [&](int st, const char* l) {
        return spec.prob_valuation[st * nl + toy.alphabet().letter_index(l)];
    };
    CHECK(val(0, "a") == Catch::Approx(0.5).margin(1e-9));
    CHECK(val(0, "b") == Catch::Approx(1.0).margin(1e-9));
    CHECK(val(0, "c") == 0.0);
    CHECK(val(1, "a") == Catch::Approx(0.5).margin(1e-9));
    CHECK(val(1, "b") == Catch::Approx(1.0).margin(1e-9));
    CHECK(val(2, "a") == Catch::Approx(0.5).margin(1e-9));
    CHECK(val(2, "b") == Catch::Approx(0.5).margin(1e-9));
    CHECK(val(2, "c") == Catch::Approx(0.25).margin(1e-9));
}

TEST_CASE("normalized valuation of wraps") {
    // singleton wrap: the uniform probabilistic valuation rho^{|x|}
    ConcurrentSystem dimer = csergo::testing::dimer();
    Spectrum spec = compute_spectrum(dimer);
    for (int l = 0; l < 4; ++l)
        CHECK(spec.prob_valuation[l] == Catch::Approx(1.0 / 3).margin(1e-9));

    // doubled systems: f_eps(c) = r^{|c|}
    ConcurrentSystem phil = csergo::testing::phil(5);
    Spectrum pspec = compute_spectrum(phil);
    double r = pspec.rho * pspec.rho;
    int eps = phil.state_index("eps");
    const Valuation f = pspec.prob_valuation;
    for (int l = 0; l < phil.n_letters(); ++l)
        CHECK(f[eps * phil.n_letters() + l] == Catch::Approx(r).margin(1e-9));
}

TEST_CASE("probabilistic check") {
    ConcurrentSystem toy = csergo::testing::toy();
    Spectrum spec = compute_spectrum(toy);
    ProbabilisticCheck ok = check_probabilistic(toy, spec.prob_valuation);
    CHECK(ok.pass());

    // the constant valuation 1 is probabilistic iff the monoid is commutative
    ConcurrentSystem commuting = wrap_monoid(Alphabet::validate({"a", "b"}, {{"a", "b"}}));
    CHECK(check_probabilistic(commuting, commuting.counting_valuation()).pass());

    ConcurrentSystem free2 = csergo::testing::free_wrap(2);
    ProbabilisticCheck bad = check_probabilistic(free2, free2.counting_valuation());
    CHECK_FALSE(bad.pass());
    CHECK(bad.max_abs_h_eps == Catch::Approx(1.0));  // h(eps) = 1 - 2
}

TEST_CASE("spectral gaps on fixtures") {
    ConcurrentSystem toy = csergo::testing::toy();
    auto gaps = spectral_gaps(toy, 0.5);
    REQUIRE(gaps.size() == 3);
    CHECK(gaps[0] == Catch::Approx((std::sqrt(5.0) - 1) / 2).margin(1e-9));  // drop a
    CHECK(gaps[1] == Catch::Approx(1.0).margin(1e-9));                       // drop b
    CHECK(gaps[2] == Catch::Approx(1.0).margin(1e-9));                       // drop c
    for (double g : gaps) CHECK(g > 0.5 + 1e-6);

    ConcurrentSystem dimer = csergo::testing::dimer();
    auto dgaps = spectral_gaps(dimer, 1.0 / 3);
    double golden = (3.0 - std::sqrt(5.0)) / 2;
    CHECK(dgaps[0] == Catch::Approx(golden).margin(1e-9));  // {b,c,d} with bd free pair
    CHECK(dgaps[1] == Catch::Approx(0.5).margin(1e-9));     // {a,c,d} keeps two pairs
    CHECK(dgaps[2] == Catch::Approx(0.5).margin(1e-9));
    CHECK(dgaps[3] == Catch::Approx(golden).margin(1e-9));

    // reducible input: restriction can keep the same root
    ModelDocument doc;
    doc.letters = {"a", "b"};
    doc.independence = {{"a", "b"}};
    doc.states = {"0"};
    doc.action["0"] = {{"a", "0"}, {"b", "0"}};
    ConcurrentSystem split = doc.build();
    double rho = characteristic_root(char_poly(mobius_matrix(split)));
    CHECK_THROWS_AS(spectral_gaps(split, rho), GapViolation);
}

TEST_CASE("spectrum invariants on fixtures and random systems") {
    SystemSampler sampler(2024);
    std::vector<ConcurrentSystem> systems{csergo::testing::toy(), csergo::testing::dimer(),
                                          csergo::testing::cyc6(), csergo::testing::phil(4),
                                          csergo::testing::phil(5)};
    for (int i = 0; i < 100; ++i) systems.push_back(sampler.next_irreducible());

    for (const ConcurrentSystem& sys : systems) {
        PolyMatrix<Rational> m = mobius_matrix(sys);
        Spectrum spec = compute_spectrum(sys);
        CHECK(std::abs(spec.theta.eval_double(spec.rho)) <= 1e-10);
        CHECK(spec.rho > 0);
        CHECK(spec.rho <= 1.0 + 1e-9);  // counting valuation
        CHECK((m.eval(spec.rho) * spec.U).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(spec.U.minCoeff() > 0);
        CHECK_FALSE(spec.smaller_modulus_root);
        CHECK(check_probabilistic(sys, spec.prob_valuation).pass());

        // cocycle identity via the kernel ratios
        for (int a = 0; a < sys.n_states(); ++a)
            for (int b = 0; b < sys.n_states(); ++b)
                for (int c = 0; c < sys.n_states(); ++c)
                    CHECK(spec.delta(a, c) ==
                          Catch::Approx(spec.delta(a, b) * spec.delta(b, c)).epsilon(1e-12));
    }
}

TEST_CASE("renormalizing a probabilistic valuation is the identity") {
    std::vector<ConcurrentSystem> systems{csergo::testing::toy(), csergo::testing::dimer(),
                                          csergo::testing::cyc6(), csergo::testing::phil(4),
                                          csergo::testing::phil(5)};
    SystemSampler sampler(31);
    for (int i = 0; i < 10; ++i) systems.push_back(sampler.next_irreducible());
    for (const ConcurrentSystem& sys : systems) {
        Spectrum spec = compute_spectrum(sys);
        NumericSpectrum again = compute_spectrum_numeric(sys, spec.prob_valuation);
        CHECK(std::abs(again.rho - 1.0) <= 1e-9);
        for (int st = 0; st < sys.n_states(); ++st)
            CHECK(std::abs(again.delta(0, st) - 1.0) <= 1e-9);
    }
}

TEST_CASE("growth ratios approach one for probabilistic weights") {
    ConcurrentSystem toy_prob = csergo::testing::toy_probabilistic();
    PolyMatrix<Rational> m = mobius_matrix(toy_prob);
    CHECK(characteristic_root(char_poly(m)) == Catch::Approx(1.0).margin(1e-9));
    double prev = 1e9;
    for (int k = 2; k <= 5; ++k) {
        double s = 1.0 - std::pow(10.0, -k);
        Eigen::MatrixXd g = growth_matrix_at(m, s);
        double err = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                err = std::max(err, std::abs(g.row(b).sum() / g.row(a).sum() - 1.0));
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-2);
}
