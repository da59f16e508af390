#include <gtest/gtest.h>

#include <cstdlib>

#include "frontlab/config.hpp"

using namespace frontlab;

namespace {

json minimal() { return json::parse(R"({"n_slow": 1, "epsilon": 0.05, "tau": [1.0], "d": [1.0]})"); }

}  // namespace

TEST(Config, ParsesAndResolvesDefaults) {
    json j = minimal();
    j["alpha"] = {2.0};
    j["higher"] = {-1.0};
    j["pde"] = json::object();
    RunConfig rc = parse_config(j);
    EXPECT_EQ(rc.params.n_slow, 1);
    EXPECT_EQ(rc.coupling.alpha[0], 2.0);
    EXPECT_EQ(rc.coupling.higher[0], -1.0);
    EXPECT_TRUE(rc.has_pde);
    EXPECT_FALSE(rc.has_continuation);
    EXPECT_EQ(rc.pde.n_x, Grid::nodes_for(20, 0.025));
    EXPECT_DOUBLE_EQ(rc.pde.dt, 1e-2);
    RunConfig back = parse_config(to_json(rc));
    EXPECT_EQ(back.pde.n_x, rc.pde.n_x);
    EXPECT_EQ(back.coupling.higher, rc.coupling.higher);
}

TEST(Config, StrictKeysAndTypes) {
    json j = minimal();
    j["colour"] = 1;
    EXPECT_THROW(parse_config(j), UsageError);
    j = minimal();
    j["epsilon"] = "small";
    EXPECT_THROW(parse_config(j), UsageError);
    j = minimal();
    j.erase("tau");
    EXPECT_THROW(parse_config(j), UsageError);
    j = minimal();
    j["pde"] = {{"scheme", "rk4"}};
    EXPECT_THROW(parse_config(j), UsageError);
    j = minimal();
    j["continuation"] = {{"param", "alpha1"}, {"stepsize", 0.1}};
    EXPECT_THROW(parse_config(j), UsageError);
}

TEST(Config, DomainViolations) {
    json j = minimal();
    j["epsilon"] = -0.1;
    EXPECT_THROW(parse_config(j), DomainError);
    j = minimal();
    j["alpha"] = {1.0, 2.0};
    EXPECT_THROW(parse_config(j), DomainError);
    j = minimal();
    j["continuation"] = {{"param", "beta2"}};
    EXPECT_THROW(parse_config(j), DomainError);
}

TEST(Config, MissingFileIsUsageError) { EXPECT_THROW(load_config("/nonexistent/frontlab.json"), UsageError); }

TEST(Format, ShortestRoundTrip) {
    EXPECT_EQ(fmt_double(0.0), "0");
    EXPECT_EQ(fmt_double(0.1), "0.1");
    EXPECT_EQ(fmt_double(-2.5), "-2.5");
    for (double x : {1.0 / 3, std::sqrt(2.0), 1e-300, 6.02214076e23})
        EXPECT_EQ(std::strtod(fmt_double(x).c_str(), nullptr), x);
}

TEST(Format, CsvHeader) {
    CsvTable t("gamma-roots", {"c", "multiplicity"});
    t.meta("interval", "[-1, 1]");
    t.row({0.5, 1});
    EXPECT_EQ(t.str(), "# frontlab v1\n# kind: gamma-roots\n# interval: [-1, 1]\nc,multiplicity\n0.5,1\n");
    EXPECT_THROW(t.row({1.0}), std::logic_error);
}
