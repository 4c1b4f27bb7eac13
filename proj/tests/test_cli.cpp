#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "ctlfrag/cli.hpp"

using namespace ctlfrag;

namespace {

const std::string kSamples = CTLFRAG_SAMPLES_DIR;

struct CliRun {
    int code = 0;
    std::string out, err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = cli::run(std::move(args), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

TEST(Cli, SatMethods) {
    const CliRun unsat = run({"sat", "--method", "pipeline", "AX p & EX ~p"});
    EXPECT_EQ(unsat.code, cli::kExitFalse);
    EXPECT_NE(unsat.out.find("unsatisfiable"), std::string::npos);
    EXPECT_EQ(run({"sat", "-m", "tree", "EX p & EX ~p"}).code, cli::kExitTrue);
    EXPECT_EQ(run({"sat", "--method", "brute", "true", "--max-worlds", "1"}).code, cli::kExitTrue);
    EXPECT_EQ(run({"sat", "--method", "brute", "p & ~p", "--max-worlds", "2"}).code, cli::kExitFalse);
    EXPECT_EQ(run({"sat", "--method", "brute", "AX p & EX ~p", "--budget", "5"}).code, cli::kExitBudget);
}

TEST(Cli, MachineOutput) {
    const CliRun r = run({"encode", "--machine", "-f", kSamples + "/fig1.ctl"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("elements=11"), std::string::npos);
    EXPECT_NE(r.out.find("gaifman_edges=13"), std::string::npos);
    const CliRun td = run({"--machine", "td", "-f", kSamples + "/fig1.ctl"});
    EXPECT_EQ(td.out, "td=3\n");
}

TEST(Cli, DecomposeAndParam) {
    const CliRun r = run({"decompose", "--exact", "--check", "-f", kSamples + "/fig1.ctl"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("pathwidth 3"), std::string::npos);
    EXPECT_NE(r.out.find("valid"), std::string::npos);
    EXPECT_EQ(run({"decompose", "-s", kSamples + "/fig1.struct", "--check"}).code, 0);
    EXPECT_EQ(run({"param", "AX p", "--machine"}).out.find("parameter=2") != std::string::npos, true);
}

TEST(Cli, ModelCheckAndMso) {
    EXPECT_EQ(run({"check", "-k", kSamples + "/chain.kripke", "A[p U q]"}).code, cli::kExitTrue);
    EXPECT_EQ(run({"check", "-k", kSamples + "/chain.kripke", "-w", "1", "p"}).code, cli::kExitFalse);
    EXPECT_EQ(run({"mso-eval", "--mso-file", kSamples + "/has_var.mso", "-s", kSamples + "/fig1.struct"}).code,
              cli::kExitTrue);
    EXPECT_EQ(run({"mso-eval", "(in X x)", "--ctl", "p", "--elem", "x=0", "--set", "X=0"}).code, cli::kExitTrue);
    EXPECT_EQ(run({"mso-eval", "(in X x)", "--ctl", "p", "--elem", "x=0", "--set", "X="}).code, cli::kExitFalse);
}

TEST(Cli, Reductions) {
    EXPECT_EQ(run({"pwsat", kSamples + "/yes.pwsat"}).code, cli::kExitTrue);
    EXPECT_EQ(run({"pwsat", kSamples + "/no.pwsat"}).code, cli::kExitFalse);
    const CliRun red = run({"reduce", kSamples + "/yes.pwsat", "-v", "au", "--machine"});
    EXPECT_EQ(red.code, 0);
    EXPECT_NE(red.out.find("operators={AU}"), std::string::npos) << red.out;
    EXPECT_EQ(run({"reduce", kSamples + "/no.pwsat", "--witness"}).code, cli::kExitFalse);
    EXPECT_EQ(run({"verify-reduction", kSamples + "/no.pwsat", "--all", "--world-bound", "2"}).code, cli::kExitTrue);
    const CliRun scan = run({"scan", "-v", "ag", "--from", "2", "--to", "3", "--machine"});
    EXPECT_NE(scan.out.find("n3.td="), std::string::npos);
}

TEST(Cli, RandomSeed) {
    const CliRun a = run({"random", "-n", "3", "--seed", "11"});
    EXPECT_EQ(a.out, run({"--seed", "11", "random", "-n", "3"}).out);
    setenv("CTLFRAG_SEED", "11", 1);
    EXPECT_EQ(run({"random", "-n", "3"}).out, a.out);
    EXPECT_NE(run({"random", "-n", "3", "--seed", "12"}).out, a.out);
    unsetenv("CTLFRAG_SEED");
}

TEST(Cli, Errors) {
    EXPECT_EQ(run({}).code, cli::kExitError);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kExitError);
    const CliRun bad = run({"parse", "p &"});
    EXPECT_EQ(bad.code, cli::kExitError);
    EXPECT_EQ(bad.err.rfind("error: ", 0), 0U);
    EXPECT_EQ(run({"check", "-k", "/nonexistent", "p"}).code, cli::kExitError);
    EXPECT_EQ(run({"sat", "--method", "pipeline", "AG p"}).code, cli::kExitError);
    EXPECT_EQ(run({"reduce", kSamples + "/yes.pwsat", "-v", "xx"}).code, cli::kExitError);
    EXPECT_EQ(run({"--help"}).code, cli::kExitTrue);
}

} // namespace
