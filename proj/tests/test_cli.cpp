#include <catch2/catch.hpp>

#include <json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    fs::create_directories("cli_scratch");
    const fs::path out = "cli_scratch/out_" + std::to_string(counter) + ".txt";
    const fs::path err = "cli_scratch/err_" + std::to_string(counter) + ".txt";
    ++counter;
    const std::string cmd = std::string("\"") + JUNGLE_CLI_PATH + "\" " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string write_scratch(const std::string& name, const std::string& content) {
    fs::create_directories("cli_scratch");
    const fs::path p = fs::path("cli_scratch") / name;
    std::ofstream f(p, std::ios::binary);
    f << content;
    return p.string();
}

std::string reference_params_file() {
    static const std::string path = write_scratch(
        "reference.json",
        R"({"e_A":0.7,"e_B":0.65,"e_D":0.72,"c_A":1.2,"c_B":1.0,"c_D":1.1})");
    return path;
}

}  // namespace

TEST_CASE("analyze produces the classification report", "[cli]") {
    const auto r = run_cli("analyze --params " + reference_params_file());
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.out);
    REQUIRE(rep.at("schema") == "1");
    REQUIRE(rep.at("config_hash").get<std::string>().size() == 16);
    REQUIRE(rep.at("cycles").size() == 3);
    REQUIRE(rep.at("cycles")[0].at("id") == "S142");
    REQUIRE(rep.at("cycles")[0].at("class") == "EAS");
    REQUIRE(rep.at("cycles")[1].at("class") == "CU");
    REQUIRE(rep.at("cycles")[2].at("class") == "CU");
    bool has_inf = false;
    for (const auto& s : rep.at("cycles")[0].at("sigma"))
        if (s.is_string() && s == "+inf") has_inf = true;
    REQUIRE(has_inf);
    REQUIRE(rep.at("network").at("sufficient_condition") == true);
    REQUIRE(rep.at("network").at("rho_products").size() == 3);
}

TEST_CASE("analyze exit codes", "[cli]") {
    SECTION("violated assumptions exit 2 with reasons") {
        const auto path = write_scratch(
            "bad_assumptions.json",
            R"({"e_A":0.7,"e_B":0.65,"e_D":0.72,"c_A":1.2,"c_B":0.6,"c_D":1.1})");
        const auto r = run_cli("analyze --params " + path);
        REQUIRE(r.exit_code == 2);
        REQUIRE(r.err.find("min c > max e") != std::string::npos);
    }

    SECTION("malformed JSON exits 1") {
        const auto path = write_scratch("broken.json", "{\"e_A\": 0.7,");
        REQUIRE(run_cli("analyze --params " + path).exit_code == 1);
    }

    SECTION("missing file exits 1") {
        REQUIRE(run_cli("analyze --params cli_scratch/nope.json").exit_code == 1);
    }

    SECTION("missing required flag exits 1") {
        REQUIRE(run_cli("analyze").exit_code == 1);
    }
}

TEST_CASE("simulate summary lines", "[cli]") {
    SECTION("equilibrium start reports a fixed point") {
        const auto r = run_cli("simulate --params " + reference_params_file() +
                               " --ic 1,0,0,0 --tmax 5 --out cli_scratch/fixed");
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out.find("fixed at xi1") != std::string::npos);
    }

    SECTION("reference-parameter run reports extinction of S3 and the 1->4->2 cycle") {
        const auto r = run_cli("simulate --params " + reference_params_file() +
                               " --tmax 200 --out cli_scratch/refrun");
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out.find("extinct: S3; tail cycle: 1->4->2") != std::string::npos);

        const json itin = json::parse(slurp("cli_scratch/refrun/itinerary.json"));
        REQUIRE(itin.at("schema") == "1");
        REQUIRE(itin.at("config_hash").get<std::string>().size() == 16);
        REQUIRE(itin.at("seed") == 0);
        REQUIRE(itin.at("survivor_nodes") == json::array({1, 2, 4}));
        REQUIRE(itin.at("extinct_nodes") == json::array({3}));

        const std::string csv = slurp("cli_scratch/refrun/trajectory.csv");
        REQUIRE(csv.rfind("t,x1,x2,x3,x4\n", 0) == 0);

        const json sidecar = json::parse(slurp("cli_scratch/refrun/run_config.json"));
        REQUIRE(sidecar.at("config_hash") == itin.at("config_hash"));
        REQUIRE(sidecar.at("config").at("seed") == 0);
    }

    SECTION("bad initial condition exits 1") {
        REQUIRE(run_cli("simulate --params " + reference_params_file() +
                        " --ic 1,2,3 --tmax 1 --out cli_scratch/badic")
                    .exit_code == 1);
    }
}

TEST_CASE("simulate is byte-deterministic for a fixed config", "[cli]") {
    const std::string common = "simulate --params " + reference_params_file() +
                               " --tmax 120 --seed 7 --out cli_scratch/det";
    REQUIRE(run_cli(common + "A").exit_code == 0);
    REQUIRE(run_cli(common + "B").exit_code == 0);
    REQUIRE(slurp("cli_scratch/detA/trajectory.csv") == slurp("cli_scratch/detB/trajectory.csv"));
    REQUIRE(slurp("cli_scratch/detA/itinerary.json") == slurp("cli_scratch/detB/itinerary.json"));
    REQUIRE(slurp("cli_scratch/detA/run_config.json") ==
            slurp("cli_scratch/detB/run_config.json"));
}

TEST_CASE("sweep over parameter grids", "[cli]") {
    SECTION("single point at the reference parameters") {
        const auto r = run_cli("sweep --params " + reference_params_file() + " --grid c_B=1:1:1");
        REQUIRE(r.exit_code == 0);
        std::stringstream ss(r.out);
        std::string header, row, extra;
        REQUIRE(std::getline(ss, header));
        REQUIRE(std::getline(ss, row));
        REQUIRE_FALSE(std::getline(ss, extra));
        REQUIRE(header.rfind("e_A,e_B,e_D,c_A,c_B,c_D,", 0) == 0);
        REQUIRE(row.find("true,true,EAS,CU,CU") != std::string::npos);
    }

    SECTION("grid straddling the sufficient-condition boundary") {
        const auto r = run_cli("sweep --params " + reference_params_file() + " --grid c_D=0.75:1.1:5");
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out.find("true,false") != std::string::npos);  // standing, not sufficient
        REQUIRE(r.out.find("true,true") != std::string::npos);
    }

    SECTION("simulation column reports the tail node set") {
        const auto r = run_cli("sweep --params " + reference_params_file() +
                               " --grid c_B=1:1:1 --with-sim --sim-tmax 150");
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out.find("sim_tail_nodes") != std::string::npos);
        REQUIRE(r.out.find("EAS,CU,CU,124") != std::string::npos);
    }

    SECTION("empty grid gives a header-only CSV") {
        const auto r = run_cli("sweep --params " + reference_params_file() + " --grid c_D=1:1:0");
        REQUIRE(r.exit_code == 0);
        REQUIRE(std::count(r.out.begin(), r.out.end(), '\n') == 1);
    }

    SECTION("oversized grids are rejected") {
        const auto r = run_cli("sweep --params " + reference_params_file() +
                               " --grid c_B=1:2:2000,c_D=1:2:2000 --cap 1000");
        REQUIRE(r.exit_code == 1);
    }

    SECTION("byte-deterministic output with a config sidecar") {
        const std::string common = "sweep --params " + reference_params_file() +
                                   " --seed 11 --grid c_D=0.8:1.2:7,e_B=0.5:0.7:3"
                                   " --out cli_scratch/sw";
        REQUIRE(run_cli(common + "1.csv").exit_code == 0);
        REQUIRE(run_cli(common + "2.csv").exit_code == 0);
        REQUIRE(slurp("cli_scratch/sw1.csv") == slurp("cli_scratch/sw2.csv"));
        const json sidecar = json::parse(slurp("cli_scratch/sw1.csv.config.json"));
        REQUIRE(sidecar.at("config").at("seed") == 11);
        REQUIRE(sidecar.at("config_hash").get<std::string>().size() == 16);
    }
}

TEST_CASE("invade predictions", "[cli]") {
    SECTION("weak alien: originals survive") {
        const auto path = write_scratch(
            "weak.json",
            R"({"alien":"weak","params":{"e_A":0.7,"e_B":0.65,"e_D":0.72,"c_A":1.2,"c_B":1.0,"c_D":1.1}})");
        const auto r = run_cli("invade --scenario " + path);
        REQUIRE(r.exit_code == 0);
        const json pred = json::parse(r.out);
        REQUIRE(pred.at("survivors") == json::array({"S1", "S2", "S3"}));
        REQUIRE(pred.at("extinct") == "A_w");
        REQUIRE(pred.at("alien_survives") == false);
        REQUIRE(pred.at("replaced").is_null());
    }

    SECTION("strong alien replaces S1") {
        const auto path = write_scratch(
            "strong.json",
            R"({"alien":"strong","params":{"e_A":0.7,"e_B":0.65,"e_D":0.72,"c_A":1.2,"c_B":1.0,"c_D":1.1}})");
        const auto r = run_cli("invade --scenario " + path);
        REQUIRE(r.exit_code == 0);
        const json pred = json::parse(r.out);
        REQUIRE(pred.at("survivors") == json::array({"A_s", "S2", "S3"}));
        REQUIRE(pred.at("replaced") == "S1");
        REQUIRE(pred.at("weakest_prey_rule") == "S1");
    }

    SECTION("invalid scenarios exit 1") {
        const auto path = write_scratch("badalien.json", R"({"alien":"huge","params":{}})");
        REQUIRE(run_cli("invade --scenario " + path).exit_code == 1);
    }

    SECTION("unclassifiable parameters exit 2") {
        const auto path = write_scratch(
            "unclass.json",
            R"({"alien":"weak","params":{"e_A":0.7,"e_B":0.7,"e_D":0.72,"c_A":1.2,"c_B":1.0,"c_D":1.1}})");
        REQUIRE(run_cli("invade --scenario " + path).exit_code == 2);
    }
}

TEST_CASE("verify runs the oracle suites", "[cli]") {
    SECTION("default run passes on the built-in parameters") {
        const auto r = run_cli("verify --draws 25");
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out.find("verify jacobian: PASS") != std::string::npos);
        REQUIRE(r.out.find("verify rho: PASS") != std::string::npos);
        REQUIRE(r.out.find("verify findex: PASS") != std::string::npos);
    }

    SECTION("an injected spectrum perturbation is caught") {
        const auto r = run_cli("verify --suites jacobian --draws 5 --perturb-spectrum 1e-5");
        REQUIRE(r.exit_code == 2);
        REQUIRE(r.out.find("verify jacobian: FAIL") != std::string::npos);
    }

    SECTION("empty or unknown suite selections exit 1") {
        REQUIRE(run_cli("verify --suites \"\"").exit_code == 1);
        REQUIRE(run_cli("verify --suites bogus").exit_code == 1);
    }

    SECTION("suite subsetting") {
        const auto r = run_cli("verify --suites findex");
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out.find("jacobian") == std::string::npos);
    }
}
