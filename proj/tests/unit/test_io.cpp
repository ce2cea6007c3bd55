// SPDX-License-Identifier: Apache-2.0

#include "irsloc/config_io.hpp"
#include "irsloc/csv.hpp"
#include "irsloc/tensor_io.hpp"
#include "testutil.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace irsloc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "irsloc_test_io";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("tensor round trip is bit exact for float32 data") {
    SymbolBlockArray a(3, 2, 5, 4);
    rng::Stream rs(4);
    for (auto& m : a.raw())
        // Dyadic values are float-exact by construction. A double -> float ->
        // double cast in this loop is folded away by GCC 11 at -O3.
        for (Eigen::Index i = 0; i < m.size(); ++i)
            m.data()[i] = cplx(std::ldexp(rs.uniform_int(-1 << 20, 1 << 20), -18),
                               std::ldexp(rs.uniform_int(-1 << 20, 1 << 20), -18));
    const fs::path p = scratch("a.bin");
    write_tensor(p.string(), a);
    const SymbolBlockArray b = read_tensor(p.string(), dims_of(a));
    REQUIRE(dims_of(b) == dims_of(a));
    for (std::size_t k = 0; k < a.raw().size(); ++k) CHECK((a.raw()[k] - b.raw()[k]).norm() == 0.0);
    // Payload size is exactly header + 8 bytes per entry.
    const auto n = static_cast<std::uintmax_t>(3 * 2 * 5 * 4 * 8);
    CHECK(fs::file_size(p) > n);
}

TEST_CASE("tensor reader rejects mismatches and truncation") {
    SymbolBlockArray a(1, 1, 2, 2);
    const fs::path p = scratch("b.bin");
    write_tensor(p.string(), a);
    CHECK_THROWS_AS(read_tensor(p.string(), TensorDims{2, 2, 1, 2}), TensorFormatError);
    const auto full = fs::file_size(p);
    fs::resize_file(p, full - 3);
    CHECK_THROWS_AS(read_tensor(p.string()), TensorFormatError);
    std::ofstream(scratch("c.bin")) << "not a tensor\n";
    CHECK_THROWS_AS(read_tensor(scratch("c.bin").string()), TensorFormatError);
}

TEST_CASE("config round trip through JSON") {
    const HarnessConfig d = preset("desk");
    const Json j = to_json(d);
    const HarnessConfig back = from_json(j, preset("full"));
    CHECK(back.scene.irs_array.num_elements == 64);
    CHECK(back.ofdm.num_subcarriers == 256);
    CHECK(back.ofdm.bandwidth() == Catch::Approx(d.ofdm.bandwidth()));
    CHECK(back.pipeline.grid.theta_min == Catch::Approx(d.pipeline.grid.theta_min));
    CHECK(back.snr_db == d.snr_db);
    CHECK(to_json(back) == j);
}

TEST_CASE("dotted overrides") {
    Json j = to_json(preset("desk"));
    apply_override(j, "subspace.q0=2");
    apply_override(j, "scene.irs_bs_model=far");
    apply_override(j, "subspace.theta_min_deg=100");
    const HarnessConfig c = from_json(j, preset("desk"));
    CHECK(c.ofdm.virtual_symbols == 2);
    CHECK(c.irs_bs_model == IrsBsModel::FarField);
    CHECK(c.pipeline.grid.theta_min == Catch::Approx(100.0 * kPi / 180.0));
    CHECK_THROWS_AS(apply_override(j, "subspace.nope=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(j, "noequals"), ConfigError);
}

TEST_CASE("strict parsing: unknown keys, bad enums and invalid values") {
    Json j = to_json(preset("desk"));
    j["lasso"]["omegaa"] = 1.0;
    CHECK_THROWS_AS(from_json(j, preset("desk")), ConfigError);
    j = to_json(preset("desk"));
    j["subspace"]["aic"] = "bic";
    CHECK_THROWS_AS(from_json(j, preset("desk")), ConfigError);
    j = to_json(preset("desk"));
    j["harness"]["num_trials"] = 0;
    CHECK_THROWS_AS(from_json(j, preset("desk")), ConfigError);
    j = to_json(preset("desk"));
    j["bogus"] = Json::object();
    CHECK_THROWS_AS(from_json(j, preset("desk")), ConfigError);
}

TEST_CASE("resolve order: preset, file, overrides, seed") {
    const fs::path p = scratch("cfg.json");
    std::ofstream(p) << R"({"harness": {"seed": 5, "num_trials": 3}})";
    ConfigSources s;
    s.path = p.string();
    s.overrides = {"harness.num_trials=7"};
    auto [c, j] = resolve_config(s);
    CHECK(c.seed == 5);
    CHECK(c.num_trials == 7);
    s.seed = 99;
    auto [c2, j2] = resolve_config(s);
    CHECK(c2.seed == 99);
    CHECK(j2["harness"]["seed"] == 99);
    s.preset = "nope";
    CHECK_THROWS_AS(resolve_config(s), ConfigError);
}

TEST_CASE("number formatting round trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(3.0) == "3");
}

TEST_CASE("CSV writers: headers, undefined cells and column checks") {
    const fs::path p = scratch("m.csv");
    RadiusMetrics m;
    m.radius = 1.0;
    m.music = aggregate(std::vector<EventCounts>(1));
    m.somp = m.music;
    write_metrics_csv(p.string(), {m});
    const auto l = lines(p);
    REQUIRE(l.size() == 3);
    CHECK(l[0].rfind("method,radius_m,trials,p_md_near,p_md_far,p_fa_near,p_fa_far", 0) == 0);
    CHECK(l[1].rfind("music,1,1,,,,,", 0) == 0);
    CHECK(l[2].rfind("somp,1,1,", 0) == 0);

    CsvWriter w(scratch("w.csv").string(), {"a", "b"});
    w.cell(1).cell("x");
    CHECK_NOTHROW(w.end_row());
    w.cell(1);
    CHECK_THROWS(w.end_row());

    const fs::path e = scratch("e.csv");
    write_estimates_csv(e.string(), {}, {});
    CHECK(lines(e).size() == 1);

    Scene s = testing::desk_scene();
    s.add_target(point_from_polar(s.irs, 10.0, 2.0));
    const fs::path t = scratch("t.csv");
    write_truth_csv(t.string(), s, 1e8);
    const auto tl = lines(t);
    REQUIRE(tl.size() == 2);
    CHECK(tl[1].rfind("0,near,", 0) == 0);
}
