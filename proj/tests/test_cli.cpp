#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = GSTFT_CLI_PATH;
const std::string kConfigs = GSTFT_CONFIG_DIR;

int run(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("check-weights on the half-line certifies all conditions") {
    const std::string out = "/tmp/gstft_cli_weights.json";
    const int rc = run(kCli + " check-weights --config " + kConfigs +
                       "/gamma_halfline.json --out " + out + " --quiet");
    CHECK(rc == 0);
    const std::string report = slurp(out);
    CHECK(report.find("\"schema\": \"gamma-stft/1\"") != std::string::npos);
    CHECK(report.find("\"OmegaSwitched\"") != std::string::npos);
    CHECK(report.find("\"certified\"") != std::string::npos);
    CHECK(report.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("check-weights flags the omega negative control") {
    const std::string out = "/tmp/gstft_cli_neg.json";
    const int rc = run(kCli + " check-weights --config " + kConfigs +
                       "/omega_negative.json --out " + out + " --quiet");
    CHECK(rc == 1);
    const std::string report = slurp(out);
    CHECK(report.find("\"falsified\"") != std::string::npos);
    CHECK(report.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("malformed config exits 2") {
    const std::string bad = "/tmp/gstft_bad_config.json";
    {
        std::ofstream os(bad);
        os << "{\"system\": {\"type\": \"exponential\"}}";  // missing keys
    }
    CHECK(run(kCli + " check-weights --config " + bad + " --quiet") == 2);
    {
        std::ofstream os(bad);
        os << "this is not json";
    }
    CHECK(run(kCli + " check-weights --config " + bad + " --quiet") == 2);
}

TEST_CASE("numerical guard exits 3") {
    // Adjoint bound with an undersized grid trips the tail-mass guard.
    const std::string bad = "/tmp/gstft_guard_config.json";
    {
        std::ofstream os(bad);
        os << R"({
  "window": {"dim": 1, "radius": 1.0},
  "f": {"dim": 1, "terms": [{"kind": "delta_deriv", "point": [2.8]}]},
  "gamma": {"type": "full_space", "dim": 1},
  "v": {"type": "poly_inv", "N": 2},
  "N_max": 2,
  "ladder": [
    {"x_min": [-3], "x_max": [3], "xi_min": [-3], "xi_max": [3],
     "x_nodes": [9], "xi_nodes": [9]},
    {"x_min": [-3], "x_max": [3], "xi_min": [-3], "xi_max": [3],
     "x_nodes": [11], "xi_nodes": [11]},
    {"x_min": [-3], "x_max": [3], "xi_min": [-3], "xi_max": [3],
     "x_nodes": [13], "xi_nodes": [13]}
  ],
  "adjoint": {
    "f": {"dim": 1, "terms": [{"kind": "delta_deriv", "point": [2.8]}]},
    "grid": {"x_min": [-3], "x_max": [3], "xi_min": [-4], "xi_max": [4],
             "x_nodes": [15], "xi_nodes": [15]},
    "B": [{"dim": 1, "sigma": 1.0, "eta": [0.0]}],
    "K_index": 1, "eps": 0.25
  }
})";
    }
    CHECK(run(kCli + " gamma-certify --config " + bad + " --quiet") == 3);
}

TEST_CASE("report subcommand converts a stored field to CSV") {
    const std::string rep = "/tmp/gstft_field_report.json";
    const std::string csv = "/tmp/gstft_field.csv";
    int rc = run(kCli + " stft-verify --config " + kConfigs +
                 "/stft_quick.json --out " + rep + " --quiet");
    REQUIRE(rc == 0);
    rc = run(kCli + " report --in " + rep + " --csv " + csv + " --quiet");
    CHECK(rc == 0);

    // Row count equals the grid size recorded in the report.
    std::ifstream is(csv);
    std::string line;
    std::size_t rows = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        ++rows;
    }
    const std::string report = slurp(rep);
    CHECK(rows > 0);
    // stft_quick uses a 21 x 31 grid.
    CHECK(rows == 21u * 31u);
}

TEST_CASE("same config and seed give byte-identical reports") {
    const std::string a = "/tmp/gstft_det_a.json", b = "/tmp/gstft_det_b.json";
    for (const std::string sub :
         {std::string("check-weights --config ") + kConfigs +
              "/gamma_halfline.json",
          std::string("stft-verify --config ") + kConfigs + "/stft_quick.json"}) {
        REQUIRE(run(kCli + " " + sub + " --seed 7 --out " + a + " --quiet") == 0);
        REQUIRE(run(kCli + " " + sub + " --seed 7 --out " + b + " --quiet") == 0);
        CHECK(slurp(a) == slurp(b));
        CHECK(!slurp(a).empty());
    }
}
