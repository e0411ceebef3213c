#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "abel/expr.hpp"

using namespace abel;

TEST_CASE("parser precedence and shape") {
    // A*x + B  ->  Add(Mul(A,x), B)
    auto e = Expression::parse("A*x + B");
    CHECK(e.serialize() == "A*x + B");
    CHECK(e.structurally_equal(Expression::parse("(A*x) + B")));
    CHECK_FALSE(e.structurally_equal(Expression::parse("A*(x + B)")));

    // sin(x)^2 -> Pow(sin(x), 2)
    auto p = Expression::parse("sin(x)^2");
    CHECK(p.structurally_equal(Expression::parse("(sin(x))^2")));
    CHECK_FALSE(p.structurally_equal(Expression::parse("sin(x^2)")));

    // ^ binds tighter than unary minus, and is right-associative
    CHECK(Expression::parse("-x^2").structurally_equal(Expression::parse("-(x^2)")));
    CHECK(Expression::parse("2^3^2").structurally_equal(Expression::parse("2^(3^2)")));
    CHECK(Expression::parse("2^3^2").evaluate(0) == 512.0);
    CHECK(Expression::parse("2^-2").evaluate(0) == 0.25);

    // * / bind tighter than + -
    CHECK(Expression::parse("1 + 2*3").evaluate(0) == 7.0);
    CHECK(Expression::parse("1 - 4/2").evaluate(0) == -1.0);
}

TEST_CASE("parser errors carry position") {
    try {
        Expression::parse("2 + * 3");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& err) {
        CHECK(err.position == 4);
    }
    CHECK_THROWS_AS(Expression::parse(""), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("(1 + 2"), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("sin x"), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("foo(x)"), UnknownIdentifierError);
    CHECK_THROWS_AS(Expression::parse("x + y"), UnknownIdentifierError);
}

TEST_CASE("evaluation basics and domain errors") {
    CHECK(Expression::parse("x^2 + 1").evaluate(2.0) == 5.0);
    CHECK(Expression::parse("sin(x)").evaluate(0.0) == 0.0);
    CHECK_THROWS_AS(Expression::parse("ln(x)").evaluate(-1.0), DomainError);
    CHECK_THROWS_AS(Expression::parse("1/x").evaluate(0.0), DomainError);
    CHECK_THROWS_AS(Expression::parse("x^-1").evaluate(0.0), DomainError);
    CHECK_THROWS_AS(Expression::parse("sqrt(x)").evaluate(-4.0), DomainError);
    CHECK_THROWS_AS(Expression::parse("A*x").evaluate(1.0), UnboundConstantError);
    CHECK(Expression::parse("A*x + B").evaluate(2.0, {{"A", 3.0}, {"B", 1.0}}) == 7.0);
}

TEST_CASE("evaluate matches hand-expanded arithmetic") {
    const Bindings b = {{"A", 1.5}, {"B", -0.25}, {"S", 2.0}, {"C", 0.5}};
    struct Case {
        const char* text;
        double (*f)(double, const Bindings&);
    };
    const Case cases[] = {
        {"x", [](double x, const Bindings&) { return x; }},
        {"2*x + 1", [](double x, const Bindings&) { return 2 * x + 1; }},
        {"x^3 - x", [](double x, const Bindings&) { return x * x * x - x; }},
        {"A*x^2 + B*x + C",
         [](double x, const Bindings& c) {
             return c.at("A") * x * x + c.at("B") * x + c.at("C");
         }},
        {"sin(x)*cos(x)", [](double x, const Bindings&) { return std::sin(x) * std::cos(x); }},
        {"sin(x)^2 + cos(x)^2",
         [](double x, const Bindings&) {
             return std::pow(std::sin(x), 2) + std::pow(std::cos(x), 2);
         }},
        {"exp(2*x)", [](double x, const Bindings&) { return std::exp(2 * x); }},
        {"exp(x) - 1", [](double x, const Bindings&) { return std::exp(x) - 1; }},
        {"ln(x^2 + 1)", [](double x, const Bindings&) { return std::log(x * x + 1); }},
        {"abs(x - 2)", [](double x, const Bindings&) { return std::abs(x - 2); }},
        {"sqrt(x^2 + 4)", [](double x, const Bindings&) { return std::sqrt(x * x + 4); }},
        {"1/(x + 10)", [](double x, const Bindings&) { return 1 / (x + 10); }},
        {"x/2 - 3/4", [](double x, const Bindings&) { return x / 2 - 0.75; }},
        {"-x^2 + x", [](double x, const Bindings&) { return -(x * x) + x; }},
        {"(x + 1)*(x - 1)", [](double x, const Bindings&) { return (x + 1) * (x - 1); }},
        {"tan(x/4)", [](double x, const Bindings&) { return std::tan(x / 4); }},
        {"S*x + A/(x + 5)",
         [](double x, const Bindings& c) { return c.at("S") * x + c.at("A") / (x + 5); }},
        {"2^x", [](double x, const Bindings&) { return std::pow(2.0, x); }},
        {"x^2^2", [](double x, const Bindings&) { return std::pow(x, 4); }},
        {"A*(exp(2*x/A) - 1)",
         [](double x, const Bindings& c) {
             return c.at("A") * (std::exp(2 * x / c.at("A")) - 1);
         }},
    };
    for (const auto& cse : cases) {
        auto e = Expression::parse(cse.text);
        for (double x : {0.3, 1.0, 2.7, -1.2}) {
            INFO(cse.text << " at x=" << x);
            CHECK_THAT(e.evaluate(x, b),
                       Catch::Matchers::WithinRel(cse.f(x, b), 1e-15) ||
                           Catch::Matchers::WithinAbs(cse.f(x, b), 1e-15));
        }
    }
}

TEST_CASE("serialize/parse round-trip is structurally stable") {
    const char* samples[] = {
        "A*x + B",
        "(4/9)*x + 2*A*x^2 + 2*A^2*x^3",
        "A/x + A^2/x^3",
        "A/x^2",
        "A*(exp(2*x/A) - 1)",
        "sin(x)^2 - cos(x)^2",
        "-x^2",
        "-(x + 1)",
        "2^3^2",
        "1/(x*(x + 1))",
        "x - -2",
        "ln(abs(x))/sqrt(x^2 + 1)",
        "tan(x)^3/(1 - x/4)",
        "x^2^3",
        "A - B - C",
        "A/(B/C)",
        "1.5e-3*x + 2.25",
    };
    for (const char* s : samples) {
        INFO(s);
        auto once = Expression::parse(s);
        auto twice = Expression::parse(once.serialize());
        CHECK(once.structurally_equal(twice));
        CHECK(once.serialize() == twice.serialize());
    }
}

TEST_CASE("classification of the paper's corpus forms") {
    auto c1 = classify_inhomogeneity(Expression::parse("A*x + B"));
    CHECK(c1.kind == BaseKind::polynomial_x);
    CHECK(c1.order == 1);

    auto c2 = classify_inhomogeneity(Expression::parse("(4/9)*x + 2*A*x^2 + 2*A^2*x^3"));
    CHECK(c2.kind == BaseKind::polynomial_x);
    CHECK(c2.order == 3);

    auto c5 = classify_inhomogeneity(Expression::parse("A*(exp(2*x/A) - 1)"));
    CHECK(c5.kind == BaseKind::exponential);
    CHECK(c5.order == 1);
}

TEST_CASE("classification of quotients and overrides") {
    // A/x^2 normalizes to the pair (1, 3): n = -2
    auto r = classify_inhomogeneity(Expression::parse("A/x^2"));
    CHECK(r.kind == BaseKind::rational);
    CHECK(r.order == -2);
    CHECK(r.m - r.k == -2);
    CHECK(r.rational_base == BaseKind::polynomial_x);

    auto r2 = classify_inhomogeneity(Expression::parse("x^3/x"));
    CHECK(r2.kind == BaseKind::rational);
    CHECK(r2.m == 3);
    CHECK(r2.k == 1);
    CHECK(r2.order == 2);

    // sums of negative powers are outside the Eq-52 scope: ambiguous
    CHECK_THROWS_AS(classify_inhomogeneity(Expression::parse("A/x + A^2/x^3")),
                    ClassificationError);
    // pure constants carry no base function
    CHECK_THROWS_AS(classify_inhomogeneity(Expression::parse("B")), ClassificationError);
    // tie between kinds
    CHECK_THROWS_AS(classify_inhomogeneity(Expression::parse("x + exp(x)")),
                    ClassificationError);

    // override is returned verbatim
    InhomogeneityClass ov;
    ov.kind = BaseKind::trigonometric;
    ov.order = 7;
    auto got = classify_inhomogeneity(Expression::parse("A/x + A^2/x^3"), ov);
    CHECK(got.kind == BaseKind::trigonometric);
    CHECK(got.order == 7);
}

TEST_CASE("classification stable under positive constant scaling") {
    const char* qs[] = {"A*x + B", "x^2 - x", "exp(x)^2", "ln(x)^3", "sin(x)", "A/x^2"};
    for (const char* q : qs) {
        INFO(q);
        auto base = classify_inhomogeneity(Expression::parse(q));
        auto scaled = classify_inhomogeneity(Expression::parse(std::string("2.5*(") + q + ")"));
        CHECK(base.kind == scaled.kind);
        CHECK(base.order == scaled.order);
        CHECK(base.m == scaled.m);
        CHECK(base.k == scaled.k);
    }
}

TEST_CASE("classification of remaining table rows") {
    CHECK(classify_inhomogeneity(Expression::parse("ln(x)^2 + ln(x)")).kind ==
          BaseKind::logarithm);
    CHECK(classify_inhomogeneity(Expression::parse("ln(x)^2 + ln(x)")).order == 2);
    CHECK(classify_inhomogeneity(Expression::parse("sin(x)^3")).kind ==
          BaseKind::trigonometric);
    CHECK(classify_inhomogeneity(Expression::parse("sin(x)^3")).order == 3);
    // mixed kinds resolved by greatest degree
    auto m = classify_inhomogeneity(Expression::parse("x + ln(x)^2"));
    CHECK(m.kind == BaseKind::logarithm);
    CHECK(m.order == 2);
}
