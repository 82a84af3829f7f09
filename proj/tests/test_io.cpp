#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "pushfront/io.hpp"

using namespace pushfront;

namespace {

RunConfig tweaked() {
    RunConfig c;
    c.h = 0.1;
    c.model.preset = "kpp";
    c.spectral.speeds = {2.5, 3.0};
    c.profile.dz = 0.025;
    c.profile.h_values = {0.0, 0.2};
    c.simulation.dt = 0.0025;
    c.simulation.datum = "heaviside";
    c.simulation.x_min = -1.0 / 3.0;
    c.diagnostics.lambda = 0.7;
    c.out_dir = "elsewhere";
    return c;
}

}  // namespace

TEST(Config, TomlRoundTrip) {
    const auto c = tweaked();
    const auto back = parse_config(to_toml(c));
    EXPECT_EQ(to_json(back), to_json(c));
    EXPECT_EQ(back.simulation.x_min, -1.0 / 3.0);
}

TEST(Config, JsonRoundTrip) {
    const auto c = tweaked();
    EXPECT_EQ(to_json(parse_config(to_json(c).dump())), to_json(c));
}

TEST(Config, DefaultsDumpIsReparseable) {
    EXPECT_EQ(to_json(parse_config(to_toml(RunConfig{}))), to_json(RunConfig{}));
}

TEST(Config, PartialFileKeepsBase) {
    const auto c = parse_config("h = 0.2\n[simulation]\nT = 60 # shorter\n");
    EXPECT_EQ(c.h, 0.2);
    EXPECT_EQ(c.simulation.T, 60.0);
    EXPECT_EQ(c.simulation.dx, RunConfig{}.simulation.dx);
    EXPECT_EQ(c.model.preset, "hadeler_rothe");
}

TEST(Config, Rejections) {
    EXPECT_THROW(parse_config(""), InvalidArgument);
    EXPECT_THROW(parse_config("  \n# only a comment\n"), InvalidArgument);
    EXPECT_THROW(parse_config("{}"), InvalidArgument);
    EXPECT_THROW(parse_config("[profile]\nfoo = 1\n"), InvalidArgument);
    EXPECT_THROW(parse_config("h = \"zero\"\n"), InvalidArgument);
    EXPECT_THROW(parse_config("h = 1\nh = 2\n"), InvalidArgument);
    EXPECT_THROW(parse_config("{\"h\": }"), InvalidArgument);
    try {
        parse_config("[simulation]\nseedd = 3\n");
        FAIL();
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("simulation.seedd"), std::string::npos);
    }
}

TEST(Config, Validation) {
    RunConfig c;
    c.h = -1;
    try {
        validate_config(c);
        FAIL();
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("h must be nonnegative"), std::string::npos);
    }
    c = RunConfig{};
    c.h = 0.1;
    c.simulation.dt = 0.003;
    EXPECT_THROW(validate_config(c), InvalidArgument);
    c.simulation.dt = 0.0025;
    EXPECT_NO_THROW(validate_config(c));
    c.simulation.datum = "gaussian";
    EXPECT_THROW(validate_config(c), InvalidArgument);
}

TEST(Config, DomainMustOutrunFront) {
    RunConfig c;
    c.simulation.x_min = -150;
    c.simulation.x_max = 150;
    c.simulation.T = 120;
    EXPECT_NO_THROW(validate_domain(c, 1.0));
    EXPECT_THROW(validate_domain(c, 2.0), InvalidArgument);
}

TEST(Csv, RoundTripWithMissingValues) {
    Table t{{"t", "left", "right"}, {{0.0, -1.0 / 3.0, std::nan("")}, {0.1, 1e-300, 12345.678}}};
    const auto back = parse_csv(to_csv(t));
    ASSERT_EQ(back.header, t.header);
    ASSERT_EQ(back.rows.size(), 2u);
    EXPECT_EQ(back.rows[0][1], -1.0 / 3.0);
    EXPECT_TRUE(std::isnan(back.rows[0][2]));
    EXPECT_EQ(back.rows[1][1], 1e-300);
    EXPECT_EQ(to_csv(back), to_csv(t));
}

TEST(Csv, Rejections) {
    EXPECT_THROW(parse_csv(""), InvalidArgument);
    EXPECT_THROW(parse_csv("a,b\n1\n"), InvalidArgument);
    EXPECT_THROW(parse_csv("a\nx\n"), InvalidArgument);
    EXPECT_THROW(to_csv(Table{{"a"}, {{1.0, 2.0}}}), InvalidArgument);
}

TEST(Reports, ConvergenceSchema) {
    ConvergenceReport r;
    r.left.push_back({1.0, 2.0, 0.1, 0.01});
    r.right.push_back({1.0, std::nullopt, 0.2, 0.01});
    r.level_sets.push_back({1.0, -3.0, std::nullopt});
    r.violations.push_back({1.0, 2.0, 1e-3});
    const auto j = to_json(r);
    for (const char* key : {"phases", "weighted_distances", "level_sets", "envelope", "fits", "notes"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_TRUE(j["phases"][0]["right"].is_null());
    EXPECT_EQ(j["envelope"]["violations"].size(), 1u);
    EXPECT_EQ(json::parse(j.dump()), j);
}

TEST(FormatNumber, ShortestExact) {
    EXPECT_EQ(format_number(0.0025), "0.0025");
    EXPECT_EQ(format_number(120.0), "120.0");
    EXPECT_EQ(std::strtod(format_number(0.1 + 0.2).c_str(), nullptr), 0.1 + 0.2);
}
