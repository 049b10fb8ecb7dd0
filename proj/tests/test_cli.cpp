#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "mmtsp/instance_io.hpp"

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(MMTSP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string kDir = testing::TempDir();

}  // namespace

TEST(Cli, GenThenSolve) {
    const std::string inst = kDir + "cli_inst.json";
    ASSERT_EQ(run("gen --scenario 2 --n-targets 9 --assign-frac 0.2 --seed 5 --out " + inst), 0);
    const auto parsed = mmtsp::read_instance(inst);
    EXPECT_EQ(parsed.num_targets(), 9u);
    EXPECT_EQ(parsed.free_targets().size(), 8u);

    const std::string trace = kDir + "cli_trace.csv";
    const std::string svg = kDir + "cli_tours";
    EXPECT_EQ(run("solve --instance " + inst + " --seed 3 --tour-mode exact --oracle --trace " + trace + " --svg " + svg), 0);
    const auto text = slurp(trace);
    EXPECT_EQ(text.rfind("stage,objective,wall_s\ninit,", 0), 0u);
    EXPECT_NE(text.find("perturbation,"), std::string::npos);
    for (const char* label : {"init", "local_search", "final"})
        EXPECT_FALSE(slurp(svg + "_" + label + ".svg").empty()) << label;
}

TEST(Cli, BenchWritesReport) {
    const std::string out = kDir + "cli_bench.csv";
    ASSERT_EQ(run("bench --scenario 1 --n-targets 8 --assign-frac 0.1 --instances 3 --seed 9 --oracle --out " + out), 0);
    const auto text = slurp(out);
    EXPECT_EQ(text.rfind("instance,init_obj,ls_obj,final_obj,oracle_obj", 0), 0u);
    EXPECT_NE(text.find("# oracle_rows=3"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("solve --instance " + kDir + "does_not_exist.json"), 2);
    EXPECT_EQ(run("bench --scenario 7 --out " + kDir + "x.csv"), 1);
    EXPECT_EQ(run("bench --scenario 1 --instances 1 --n-targets 5 --out /nonexistent/dir/x.csv"), 2);
    EXPECT_EQ(run("frobnicate"), 1);

    const std::string bad = kDir + "cli_bad.json";
    std::ofstream(bad) << R"({"targets": [[0, 0]], "vehicles": [{"speed": 0, "depot": [0, 0]}]})";
    EXPECT_EQ(run("solve --instance " + bad), 1);
}
