#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string &args) {
    std::string cmd = std::string(WH_FACTOR_BIN) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    if (WIFEXITED(status))
        return WEXITSTATUS(status);
    return -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir(const char *tag) : path(fs::temp_directory_path() / tag) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

} // namespace

TEST_CASE("scalar factorisation writes its artifacts and succeeds") {
    TempDir dir("wh_cli_scalar");
    CHECK(run("factor-scalar --symbol f-example-k2 --grid-size 1024 --out " + dir.str()) == 0);
    CHECK(fs::exists(dir.path / "factor_scalar_f-example-k2.json"));
    CHECK(fs::exists(dir.path / "factor_scalar_f-example-k2_modulus.csv"));
    std::string csv = slurp(dir.path / "factor_scalar_f-example-k2_modulus.csv");
    CHECK(csv.rfind("t,abs_plus,abs_minus\n", 0) == 0);
}

TEST_CASE("matrix factorisation succeeds for both reference symbols") {
    TempDir dir("wh_cli_dk");
    CHECK(run("factor-dk --example k1 --grid-size 1024 --out " + dir.str()) == 0);
    CHECK(run("factor-dk --example k2 --grid-size 1024 --out " + dir.str()) == 0);
    CHECK(fs::exists(dir.path / "factor_dk_k1.json"));
    CHECK(fs::exists(dir.path / "factor_dk_k2_modulus_a11.csv"));
}

TEST_CASE("spec files with a constant symbol are accepted") {
    TempDir dir("wh_cli_spec");
    fs::path spec = dir.path / "spec.json";
    std::ofstream(spec) << R"({"f_constant": [0.0, 0.0]})";
    CHECK(run("factor-dk --spec " + spec.string() + " --grid-size 512 --out " + dir.str()) == 0);
    CHECK(fs::exists(dir.path / "factor_dk_spec.json"));
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("") == 2);
    CHECK(run("no-such-command") == 2);
    CHECK(run("factor-scalar --symbol no-such-symbol") == 2);
    CHECK(run("factor-dk --example k3") == 2);
    CHECK(run("factor-scalar --grid-size 1000") == 2);      // not a power of two
    CHECK(run("factor-scalar --grid-size 64") == 2);        // below the floor
    CHECK(run("factor-scalar --tol 0.5") == 2);             // above the cap
    CHECK(run("stability") == 2);
}

TEST_CASE("factorisation failures exit with code 3") {
    // tolerance nobody can meet turns a clean run into a reported failure
    CHECK(run("factor-dk --example k1 --grid-size 512 --tol 1e-15 --out " +
              fs::temp_directory_path().string()) == 3);
}

TEST_CASE("grid size can come from the environment") {
    TempDir dir("wh_cli_env");
    std::string cmd = std::string("WH_FACTOR_GRID=1000 ") + WH_FACTOR_BIN +
                      " factor-scalar --symbol one --out " + dir.str() + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 2);
    cmd = std::string("WH_FACTOR_GRID=512 ") + WH_FACTOR_BIN +
          " factor-scalar --symbol one --out " + dir.str() + " > /dev/null 2>&1";
    status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 0);
    std::string json = slurp(dir.path / "factor_scalar_one.json");
    // 512 nodes serialized
    CHECK(json.find("\"t\"") != std::string::npos);
}

TEST_CASE("sweep artifacts are byte-identical across runs") {
    TempDir a("wh_cli_sweep_a");
    TempDir b("wh_cli_sweep_b");
    std::string common = "stability sweep --example k1 --count 4 --seed 11 --grid-size 512 ";
    CHECK(run(common + "--out " + a.str()) == 0);
    CHECK(run(common + "--out " + b.str()) == 0);
    CHECK(slurp(a.path / "sweep_k1.csv") == slurp(b.path / "sweep_k1.csv"));
    CHECK(slurp(a.path / "sweep_k1_summary.json") == slurp(b.path / "sweep_k1_summary.json"));
    CHECK(!slurp(a.path / "sweep_k1.csv").empty());

    TempDir c("wh_cli_sweep_c");
    CHECK(run("stability sweep --example k1 --count 4 --seed 12 --grid-size 512 --out " +
              c.str()) == 0);
    CHECK(slurp(a.path / "sweep_k1.csv") != slurp(c.path / "sweep_k1.csv"));
}

TEST_CASE("remaining stability commands run clean") {
    TempDir dir("wh_cli_stab");
    CHECK(run("stability unstable --epsilon 1e-3 --grid-size 512 --out " + dir.str()) == 0);
    CHECK(fs::exists(dir.path / "unstable.json"));
    CHECK(run("stability abrahams --epsilon 1e-2 --grid-size 1024 --out " + dir.str()) == 0);
    CHECK(fs::exists(dir.path / "pole_removal.json"));
    CHECK(run("stability bounds --example k1 --grid-size 1024 --degree [10,10] --out " +
              dir.str()) == 0);
    CHECK(fs::exists(dir.path / "bounds_k1.json"));
}

TEST_CASE("method comparison emits its difference trace") {
    TempDir dir("wh_cli_cmp");
    CHECK(run("compare-methods --example k1 --grid-size 1024 --degree [14,14] --tol 1e-4 --out " +
              dir.str()) == 0);
    CHECK(fs::exists(dir.path / "compare_k1.json"));
    CHECK(fs::exists(dir.path / "compare_k1_a11_diff.csv"));
}
