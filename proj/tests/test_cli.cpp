#include "oro/cli.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace oro;
namespace fs = std::filesystem;

namespace {

int run_cli(std::initializer_list<std::string> args) { return cli::run(std::vector<std::string>(args)); }

} // namespace

TEST_CASE("solve-orlp command") {
    const auto dir = test::temp_dir();
    const auto out = (dir / "sol.txt").string();
    SUBCASE("random family baseline run") {
        CHECK(run_cli({"solve-orlp", "--random", "--n", "20", "--j", "4", "--k", "0.1", "--r", "0",
                       "--out", out}) == 0);
        const std::string dump = test::read_text(out);
        CHECK(dump.find("status = converged") != std::string::npos);
        CHECK(fs::exists(out + ".trace.csv"));
        CHECK(fs::exists(out + ".manifest"));
    }
    SUBCASE("missing MPS file is a usage error") {
        CHECK(run_cli({"solve-orlp", "--mps", (dir / "missing.mps").string(), "--k", "0.1", "--out",
                       out}) == 1);
    }
    SUBCASE("optimism produces a monotone multi-step trace") {
        CHECK(run_cli({"solve-orlp", "--random", "--n", "20", "--j", "4", "--k", "0.2", "--r",
                       "0.25", "--out", out}) == 0);
        std::istringstream trace(test::read_text(out + ".trace.csv"));
        std::string line;
        std::getline(trace, line); // header
        int count = 0;
        double prev = 0.0;
        while (std::getline(trace, line)) {
            const double obj = std::stod(line.substr(line.find(',') + 1));
            if (count > 0) CHECK(obj <= prev + 1e-9);
            prev = obj;
            ++count;
        }
        CHECK(count >= 2);
    }
    SUBCASE("usage errors") {
        CHECK(run_cli({"solve-orlp", "--random", "--out", out}) == 1); // missing --k
        CHECK(run_cli({"bogus-command"}) == 1);
    }
    SUBCASE("infeasible models exit 2") {
        const auto mps = dir / "infeasible.mps";
        test::write_text(mps, "NAME BAD\nROWS\n N C\n L R1\nCOLUMNS\n    X C 1.0 R1 1.0\nRHS\n"
                              "    RHS R1 -1.0\nENDATA\n");
        CHECK(run_cli({"solve-orlp", "--mps", mps.string(), "--k", "0.5", "--out", out}) == 2);
        CHECK(test::read_text(out).find("status = infeasible") != std::string::npos);
    }
    SUBCASE("repeated runs are byte-identical") {
        REQUIRE(run_cli({"solve-orlp", "--random", "--n", "15", "--j", "3", "--k", "0.2", "--r",
                         "0.25", "--seed", "4", "--out", out}) == 0);
        const std::string first = test::read_text(out);
        const std::string trace = test::read_text(out + ".trace.csv");
        REQUIRE(run_cli({"solve-orlp", "--random", "--n", "15", "--j", "3", "--k", "0.2", "--r",
                         "0.25", "--seed", "4", "--out", out}) == 0);
        CHECK(test::read_text(out) == first);
        CHECK(test::read_text(out + ".trace.csv") == trace);
    }
}

TEST_CASE("experiment command") {
    const auto dir = test::temp_dir();
    const auto grid_path = dir / "grid.cfg";
    const auto out = (dir / "run.csv").string();
    test::write_text(grid_path, "K_values = 0,0.2\nR_values = 0,0.25\nM_values = 0,1\n"
                                "trials = 50\nseed = 3\ndeviation_fraction = 0.1\nn = 15\nj = 3\n");
    SUBCASE("runs and is reproducible") {
        CHECK(run_cli({"experiment", "--family", "random", "--grid-file", grid_path.string(),
                       "--out", out}) == 0);
        const std::string first = test::read_text(out);
        CHECK(first.rfind("K,R,M,", 0) == 0);
        // 4 solve rows + direct sims (2 cells x 2 M) + cross sims (2 x 2 x 2)
        CHECK(std::count(first.begin(), first.end(), '\n') == 1 + 4 + 4 + 8);
        CHECK(run_cli({"experiment", "--family", "random", "--grid-file", grid_path.string(),
                       "--out", out}) == 0);
        CHECK(test::read_text(out) == first);
    }
    SUBCASE("single-trial probabilities are 0 or 1") {
        test::write_text(grid_path, "K_values = 0.2\nR_values = 0.25\nM_values = 1\n"
                                    "trials = 1\nseed = 5\ndeviation_fraction = 0.1\nn = 15\nj = 3\n");
        CHECK(run_cli({"experiment", "--family", "random", "--grid-file", grid_path.string(),
                       "--out", out}) == 0);
        std::istringstream csv(test::read_text(out));
        std::string line;
        std::getline(csv, line);
        while (std::getline(csv, line)) {
            if (line.find("sim") == std::string::npos) continue;
            const auto fields = [&] {
                std::vector<std::string> f;
                std::istringstream ls(line);
                std::string tok;
                while (std::getline(ls, tok, ',')) f.push_back(tok);
                return f;
            }();
            const double p = std::stod(fields[5]);
            CHECK((p == 0.0 || p == 1.0));
        }
    }
    SUBCASE("malformed grid files are diagnosed with a line number") {
        test::write_text(grid_path, "K_values = 0,0.2\nwhat\n");
        CHECK(run_cli({"experiment", "--family", "random", "--grid-file", grid_path.string(),
                       "--out", out}) == 1);
    }
    SUBCASE("mps family runs end to end") {
        const auto mps = dir / "tiny.mps";
        test::write_text(mps, "NAME TINY\nROWS\n N C\n L R1\n L R2\nCOLUMNS\n"
                              "    X C -1.0 R1 0.4\n    X R2 0.3\n"
                              "    Y C -0.5 R1 0.2\n    Y R2 0.5\nRHS\n"
                              "    RHS R1 1.0 R2 1.0\nENDATA\n");
        test::write_text(grid_path, "K_values = 0,0.5\nR_values = 0\nM_values = 1\n"
                                    "trials = 50\nseed = 9\ndeviation_fraction = 0.1\n");
        CHECK(run_cli({"experiment", "--family", "mps", "--mps", mps.string(), "--grid-file",
                       grid_path.string(), "--out", out}) == 0);
        const std::string csv = test::read_text(out);
        CHECK(csv.rfind("K,R,M,", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 + 2);
    }
}

TEST_CASE("train command") {
    const auto dir = test::temp_dir();
    const auto data = dir / "sep.csv";
    const auto out = (dir / "model.txt").string();
    test::write_text(data, "1.0,0.0,1\n-1.0,0.0,-1\n");

    SUBCASE("plain separable classification reports zero loss") {
        CHECK(run_cli({"train", "--task", "svc", "--data", data.string(), "--reg", "none", "--out",
                       out}) == 0);
        const std::string dump = test::read_text(out);
        CHECK(dump.find("loss = 0\n") != std::string::npos);
    }
    SUBCASE("trimmed run reports the excluded outlier") {
        const auto reg = dir / "line.csv";
        std::string text;
        for (int i = 0; i < 10; ++i)
            text += fmt_double(0.1 * i) + "," + fmt_double(0.2 * i + 0.5) + "\n";
        text += "0.5,9.0\n";
        test::write_text(reg, text);
        CHECK(run_cli({"train", "--task", "trimmed", "--data", reg.string(), "--nu", "1.0", "--mu",
                       "0.1", "--C", "50", "--loss", "squared", "--out", out}) == 0);
        const std::string dump = test::read_text(out);
        CHECK(dump.find("excluded_indices = 10") != std::string::npos);
    }
    SUBCASE("regularizer validation failures exit 1") {
        CHECK(run_cli({"train", "--task", "svc", "--data", data.string(), "--reg", "scad",
                       "--theta", "1.5", "--z", "0.1", "--out", out}) == 1);
    }
    SUBCASE("label domain violations exit 1") {
        const auto bad = dir / "bad.csv";
        test::write_text(bad, "1.0,2\n-1.0,-1\n");
        CHECK(run_cli({"train", "--task", "svc", "--data", bad.string(), "--out", out}) == 1);
    }
}

TEST_CASE("fetch-netlib command") {
    const auto dir = test::temp_dir();
    const auto dest = (dir / "fetched.mps").string();
    SUBCASE("unknown instance names are rejected") {
        CHECK(run_cli({"fetch-netlib", "--name", "unknown", "--dest", dest}) == 1);
    }
    SUBCASE("unreachable mirror is an external failure") {
        CHECK(run_cli({"fetch-netlib", "--name", "CAPRI", "--dest", dest, "--mirror",
                       "file://" + (dir / "absent.mps").string()}) == 3);
    }
    SUBCASE("local fixture round-trips") {
        const auto fixture = dir / "capri.mps";
        test::write_text(fixture,
                         "NAME FAKE\nROWS\n N C\n L R\nCOLUMNS\n    X C 1.0 R 1.0\nRHS\n"
                         "    RHS R 2.0\nENDATA\n");
        CHECK(run_cli({"fetch-netlib", "--name", "CAPRI", "--dest", dest, "--mirror",
                       "file://" + fixture.string()}) == 0);
        const std::string manifest = test::read_text(dest + ".manifest");
        CHECK(manifest.find("columns = 1") != std::string::npos);
        CHECK(manifest.find("dimension_check = mismatch") != std::string::npos);
        CHECK(test::read_text(dest).rfind("NAME FAKE", 0) == 0);
    }
    SUBCASE("compressed payloads are refused with advice") {
        const auto fixture = dir / "compressed";
        test::write_text(fixture, "x7 12 garbage header\nnot mps at all\n");
        CHECK(run_cli({"fetch-netlib", "--name", "CAPRI", "--dest", dest, "--mirror",
                       "file://" + fixture.string()}) == 3);
    }
}
