#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specbranch/expression.hpp"
#include "specbranch/family.hpp"
#include "specbranch/gallery.hpp"
#include "support/oracles.hpp"

using namespace specbranch;

TEST_CASE("expressions evaluate")
{
    CHECK(parse_expression("t^2+1").evaluate(2.0) == Complex(5.0));
    CHECK(parse_expression("sin(t)/2").evaluate(0.0) == Complex(0.0));
    CHECK(parse_expression("2^(-(3*3))").evaluate(17.0) == Complex(1.0 / 512.0));
    CHECK(parse_expression("-t^2").evaluate(3.0) == Complex(-9.0));
    CHECK(parse_expression("2^3^2").evaluate(0.0) == Complex(512.0));
    CHECK(parse_expression("abs(t) + sqrt(4) + exp(0) + cos(0)").evaluate(-1.5) == Complex(5.5));
    CHECK(parse_expression("pi").evaluate(0.0).real() == doctest::Approx(M_PI).epsilon(1e-16));
    CHECK(parse_expression("i*i").evaluate(0.0) == Complex(-1.0));
    CHECK(parse_expression("t*x", true).evaluate(2.0, 0.25) == Complex(0.5));
    CHECK(parse_expression("1e-3 * 2.5E2").evaluate(0.0).real() == doctest::Approx(0.25));
}

TEST_CASE("expression errors carry a position")
{
    try {
        parse_expression("1 + * t");
        FAIL("expected a syntax error");
    } catch (const ExpressionError& e) {
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS(parse_expression("foo(t)"), ExpressionError);
    CHECK_THROWS_AS(parse_expression("x + t"), ExpressionError);
    CHECK_THROWS_AS(parse_expression(""), ExpressionError);
    CHECK_THROWS_AS(parse_expression("(t"), ExpressionError);
    CHECK_THROWS_AS(parse_expression("t t"), ExpressionError);
    CHECK(parse_expression(" t ").uses_imaginary_unit() == false);
    CHECK(parse_expression("1 + 2*i").uses_imaginary_unit());
}

TEST_CASE("expression families")
{
    const HermitianFamily f = make_expression_family({2, {"0", "t", "0"}});
    ComplexMatrix expected(2, 2);
    expected << 0, 0.5, 0.5, 0;
    CHECK((f.eval(0.5) - expected).norm() == 0.0);

    SUBCASE("derivative of [[0,t],[t,0]]")
    {
        ComplexMatrix swap(2, 2);
        swap << 0, 1, 1, 0;
        CHECK((derivative_family(f)(0.3) - swap).norm() <= 1e-9);
    }
    SUBCASE("full entries with mirrored lower triangle")
    {
        const HermitianFamily g = make_expression_family({2, {"1", "t + i", "*", "2"}});
        const ComplexMatrix a = g.eval(1.0);
        CHECK(a(1, 0) == Complex(1.0, -1.0));
        CHECK(is_hermitian(a, 1e-15));
    }
    SUBCASE("explicit lower entries must match")
    {
        const HermitianFamily g = make_expression_family({2, {"1", "t", "t", "2"}});
        CHECK(is_hermitian(g.eval(0.7), 1e-15));
        const HermitianFamily bad = make_expression_family({2, {"1", "t", "2*t", "2"}});
        CHECK_THROWS_AS(bad.eval(1.0), std::invalid_argument);
        CHECK_NOTHROW(bad.eval(0.0));
    }
    SUBCASE("imaginary diagonal is refused")
    {
        CHECK_THROWS_AS(make_expression_family({2, {"i", "t", "0"}}), std::invalid_argument);
        const HermitianFamily g = make_expression_family({1, {"sqrt(t)"}});
        CHECK_THROWS_AS(g.eval(-1.0), std::invalid_argument);
    }
    SUBCASE("wrong entry count")
    {
        CHECK_THROWS_AS(make_expression_family({2, {"0", "t"}}), std::invalid_argument);
        CHECK_THROWS_AS(make_expression_family({0, {}}), std::invalid_argument);
    }
}

TEST_CASE("family evaluation checks shape and Hermiticity")
{
    HermitianFamily wrong_shape("bad", 2, [](double) { return ComplexMatrix::Zero(3, 3); });
    CHECK_THROWS_AS(wrong_shape.eval(0.0), std::invalid_argument);
    HermitianFamily skew("skew", 2, [](double t) {
        ComplexMatrix a(2, 2);
        a << 0, t, -t, 0;
        return a;
    });
    CHECK_NOTHROW(skew.eval(0.0));
    CHECK_THROWS_AS(skew.eval(1.0), std::invalid_argument);
    CHECK_THROWS_AS(HermitianFamily("x", 0, [](double) { return ComplexMatrix(); }),
                    std::invalid_argument);
    CHECK_THROWS_AS(HermitianFamily("x", 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(
        HermitianFamily("x", 1, [](double) { return ComplexMatrix::Zero(1, 1); }, {}, {}, 0.0),
        std::invalid_argument);
}

TEST_CASE("Hermiticity at random t for every family")
{
    std::mt19937_64 rng(21);
    std::vector<std::pair<HermitianFamily, std::pair<double, double>>> families;
    families.push_back({make_expression_family({3, {"t", "t^2 + i*t", "1", "-t", "sin(t)", "2"}}),
                        {-2.0, 2.0}});
    families.push_back({curve_lemma_family(5), {curve_lemma_center(2) - 0.25, 7.0}});
    families.push_back({curve_lemma_unit_window(9), {-1.0, 1.0}});
    families.push_back({resolvent_example_family(30), {-0.5, 1.5}});
    families.push_back({schrodinger_family("t*x + sin(3*x)", 20), {-1.0, 1.0}});
    for (const auto& [family, range] : families) {
        std::uniform_real_distribution<double> u(range.first, range.second);
        for (int k = 0; k < 100; ++k) {
            const ComplexMatrix a = family.eval(u(rng));
            CHECK(hermitian_defect(a) <= 1e-10 * std::max(1.0, a.norm()));
        }
    }
}

TEST_CASE("analytic derivatives agree with central differences to second order")
{
    std::mt19937_64 rng(2);
    const oracle::LinearSpectrumFamily lines{oracle::random_hermitian(4, rng),
                                             RealVector::LinSpaced(4, -1.0, 1.0),
                                             RealVector::LinSpaced(4, 0.5, -0.5)};
    std::vector<HermitianFamily> families{lines.family(), resolvent_example_family(3),
                                          curve_lemma_family(4)};
    std::vector<std::pair<double, double>> ranges{{-1.0, 1.0}, {0.1, 0.5}, {5.3, 5.4}};
    for (std::size_t f = 0; f < families.size(); ++f) {
        const HermitianFamily& family = families[f];
        REQUIRE(family.has_analytic_derivative());
        std::uniform_real_distribution<double> u(ranges[f].first, ranges[f].second);
        for (int k = 0; k < 10; ++k) {
            const double t = u(rng);
            const ComplexMatrix exact = family.derivative(t);
            const double h = 1e-3;
            const double e1 = (central_difference(family, t, h) - exact).norm();
            const double e2 = (central_difference(family, t, h / 2) - exact).norm();
            if (e1 < 1e-9) continue;  // locally linear, nothing to measure
            const double ratio = e1 / e2;
            CHECK(ratio >= 3.5);
            CHECK(ratio <= 4.5);
        }
    }
}

TEST_CASE("derivative_family")
{
    HermitianFamily constant("c", 2, [](double) {
        ComplexMatrix a(2, 2);
        a << 1, 2, 2, 3;
        return a;
    });
    CHECK(derivative_family(constant)(0.4).norm() <= 1e-9);
    CHECK(constant.second_derivative(0.4).norm() <= 1e-5);

    // A'(t_n) = A_n'(0): off-diagonal 2^{-n²}/s_n = 2^{-n}
    const HermitianFamily glued = curve_lemma_family(6);
    for (int n = 2; n <= 6; ++n) {
        const ComplexMatrix d = glued.derivative(curve_lemma_center(n));
        CHECK(d(0, 1) == Complex(std::ldexp(1.0, -n)));
        CHECK(d(0, 0) == Complex(0.0));
    }

    const HermitianFamily sq = make_expression_family({1, {"t^3"}});
    CHECK(sq.second_derivative(2.0)(0, 0).real() == doctest::Approx(12.0).epsilon(1e-6));
}

TEST_CASE("graph norms")
{
    HermitianFamily zero("zero", 2, [](double) { return ComplexMatrix::Zero(2, 2); });
    ComplexVector u(2);
    u << 3.0, Complex(0.0, 4.0);
    CHECK(graph_norm(zero, 0.3, u) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(graph_norm(zero, 0.3, ComplexVector::Zero(2)) == 0.0);
    CHECK_THROWS_AS(graph_norm(zero, 0.0, ComplexVector::Zero(3)), std::invalid_argument);

    HermitianFamily three("three", 1, [](double) { return ComplexMatrix::Constant(1, 1, 3.0); });
    CHECK(graph_norm(three, 0.0, ComplexVector::Ones(1)) ==
          doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));

    HermitianFamily diag_t("diag(t)", 1, [](double t) { return ComplexMatrix::Constant(1, 1, t); });
    CHECK(graph_norm_equivalence_ratio(diag_t, 0.0, 1.0, 8) >= std::sqrt(2.0) - 1e-12);
    CHECK(graph_norm_equivalence_ratio(diag_t, 0.5, 0.5, 8) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(graph_norm_equivalence_ratio(three, 0.0, 5.0, 8) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(graph_norm_equivalence_ratio(three, 0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("graph norms dominate the plain norm and ratios multiply to at least one")
{
    std::mt19937_64 rng(13);
    const HermitianFamily family = resolvent_example_family(25);
    const HermitianFamily expr =
        make_expression_family({3, {"t", "1 + i*t", "0", "t^2", "2", "-3*t"}});
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const HermitianFamily* f : {&family, &expr}) {
        for (int k = 0; k < 20; ++k) {
            const double s = u(rng), t = u(rng);
            const ComplexVector v = oracle::gaussian(f->dimension(), 1, rng);
            CHECK(graph_norm(*f, t, v) >= v.norm());
            const double forward = graph_norm_equivalence_ratio(*f, s, t, 16, 1);
            const double backward = graph_norm_equivalence_ratio(*f, t, s, 16, 1);
            CHECK(forward * backward >= 1.0 - 1e-12);
            // the sampled directions can never beat the extremal one
            for (int j = 0; j < 5; ++j) {
                const ComplexVector w = oracle::gaussian(f->dimension(), 1, rng);
                CHECK(graph_norm(*f, t, w) / graph_norm(*f, s, w) <= forward * (1.0 + 1e-10));
            }
        }
    }
}

TEST_CASE("graph_operator_norm")
{
    // A(t) = t: A' = 1, ‖A'(I + A²)^{-1/2}‖ = 1/√(1+t²)
    HermitianFamily line("t", 1, [](double t) { return ComplexMatrix::Constant(1, 1, t); },
                         [](double) { return ComplexMatrix::Constant(1, 1, 1.0); });
    for (double t : {0.0, 0.5, -2.0}) {
        CHECK(graph_operator_norm(line, t) ==
              doctest::Approx(1.0 / std::sqrt(1.0 + t * t)).epsilon(1e-14));
    }
}
