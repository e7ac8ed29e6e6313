#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "gtcm/cli.hpp"

using namespace gtcm;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("distance command prints the documented row") {
    auto r = run_cli({"distance", "--code", "(1 3)", "--k", "1", "--n", "2", "--v", "1",
                      "--target", "qpsk"});
    REQUIRE(r.code == 0);
    REQUIRE(r.err.empty());
    REQUIRE(r.out == "d_sq,beta_db,L\n6.0,1.76,2\n");
}

TEST_CASE("distance accepts explicit register lengths and a source override") {
    auto r = run_cli({"distance", "--code", "(0 0 1)(2 5 1)", "--k", "2", "--n", "3", "--reg",
                      "0,2", "--target", "8psk", "--source", "qpsk"});
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    REQUIRE(lines[0] == "d_sq,beta_db,L");
    REQUIRE(lines[1].substr(0, 4) == "4.0,");
}

TEST_CASE("catastrophic codes are a domain error") {
    auto r = run_cli({"distance", "--code", "(3 6)", "--k", "1", "--n", "2", "--v", "2",
                      "--target", "qpsk"});
    REQUIRE(r.code == 1);
    REQUIRE(r.out.empty());
    REQUIRE(r.err.substr(0, 6) == "error:");
    REQUIRE(r.err.find('\n') == r.err.size() - 1);
}

TEST_CASE("usage problems exit with 2") {
    auto bad_flag = run_cli({"distance", "--bogus"});
    REQUIRE(bad_flag.code == 2);
    REQUIRE(bad_flag.err.substr(0, 6) == "error:");

    auto bad_cmd = run_cli({"frobnicate"});
    REQUIRE(bad_cmd.code == 2);

    auto nothing = run_cli({});
    REQUIRE(nothing.code == 2);

    auto help = run_cli({"--help"});
    REQUIRE(help.code == 0);
    REQUIRE(help.out.find("distance") != std::string::npos);
    REQUIRE(help.out.find("sweep") != std::string::npos);
    REQUIRE(help.out.find("frame-encode") != std::string::npos);
}

TEST_CASE("search finds the known 4-state optimum") {
    std::vector<std::string> args = {"search", "--k",      "1",    "--n",    "2",
                                     "--v",    "2",        "--target", "qpsk",
                                     "--trials", "1000",   "--seed", "1"};
    auto r = run_cli(args);
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    REQUIRE(lines[0] == "k,n,v,target,trials,valid,d_sq,beta_db,L,taps");
    REQUIRE(lines[1].find(",10.0,3.98,") != std::string::npos);
    REQUIRE(lines[1].substr(0, 11) == "1,2,2,qpsk,");

    auto again = run_cli(args);
    REQUIRE(again.out == r.out);

    auto full = run_cli({"search", "--k", "1", "--n", "2", "--v", "2", "--target", "qpsk",
                         "--full"});
    REQUIRE(full.code == 0);
    REQUIRE(lines_of(full.out)[1].find(",10.0,3.98,") != std::string::npos);
}

TEST_CASE("search with an impossible shape is a domain error") {
    auto r = run_cli({"search", "--k", "1", "--n", "3", "--reg", "0", "--target", "8psk",
                      "--trials", "50"});
    REQUIRE(r.code == 1);
    REQUIRE(r.err.substr(0, 6) == "error:");
}

TEST_CASE("verify-catalog reports every row and a clean summary") {
    auto r = run_cli({"verify-catalog", "--vmax", "2"});
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 1 + 86 + 1);
    REQUIRE(lines[0].substr(0, 6) == "index,");
    REQUIRE(lines[1].substr(0, 17) == "0,bpsk,qpsk,1,(1 ");
    const std::string summary = lines.back();
    REQUIRE(summary.find("mismatch=0") != std::string::npos);
    REQUIRE(summary.find("# checked=") == 0);

    size_t checked = 0;
    for (size_t i = 1; i + 1 < lines.size(); ++i) {
        auto cols = lines_of(lines[i]);  // placeholder, real split below
        (void)cols;
        // checked flag is the second-to-last field
        auto tail = lines[i].rfind(",1,1");
        if (tail != std::string::npos && tail == lines[i].size() - 4) ++checked;
    }
    REQUIRE(summary.find("checked=" + std::to_string(checked)) != std::string::npos);
}

TEST_CASE("catalog dump matches the built-in table and honours GTCM_CATALOG") {
    auto r = run_cli({"catalog"});
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 1 + 86);
    REQUIRE(lines[0] == "# source target v beta_db taps");
    REQUIRE(lines[1] == "bpsk qpsk 1 1.76 (1 3)");
    REQUIRE(lines.back() == "qpsk 64qam 10 4.63 (12 2 7 4 0 17)(330 102 231 140 46 220)");

    const char* path = "cli_test_catalog.txt";
    {
        std::ofstream f(path);
        f << "bpsk qpsk 1 1.76 (1 3)\nbpsk qpsk 2 3.98 (2 7)\n";
    }
    setenv("GTCM_CATALOG", path, 1);
    auto env_r = run_cli({"catalog"});
    unsetenv("GTCM_CATALOG");
    std::remove(path);
    REQUIRE(env_r.code == 0);
    REQUIRE(lines_of(env_r.out).size() == 1 + 2);

    setenv("GTCM_CATALOG", "no_such_file_anywhere.txt", 1);
    auto missing = run_cli({"catalog"});
    unsetenv("GTCM_CATALOG");
    REQUIRE(missing.code == 1);
    REQUIRE(missing.err.substr(0, 6) == "error:");
}

TEST_CASE("uncoded sweep emits the stable schema deterministically") {
    std::vector<std::string> args = {"sweep", "--scenario", "uncoded:qpsk", "--from", "0",
                                     "--to", "2", "--step", "1", "--budget", "20000",
                                     "--errors", "100", "--seed", "7"};
    auto r = run_cli(args);
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 1 + 3);
    REQUIRE(lines[0] == "scenario,eb_n0_db,bits,errors,ber");
    for (size_t i = 1; i < lines.size(); ++i)
        REQUIRE(lines[i].substr(0, 13) == "uncoded:qpsk,");

    auto again = run_cli(args);
    REQUIRE(again.out == r.out);
}

TEST_CASE("coded sweep pulls its code from the catalog") {
    std::vector<std::string> args = {"sweep", "--scenario", "coded:1", "--from", "4", "--to",
                                     "4", "--budget", "20000", "--errors", "50",
                                     "--block-steps", "512", "--seed", "3"};
    auto r = run_cli(args);
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    REQUIRE(lines[1].substr(0, 8) == "coded:1,");

    auto again = run_cli(args);
    REQUIRE(again.out == r.out);

    auto oob = run_cli({"sweep", "--scenario", "coded:999"});
    REQUIRE(oob.code == 1);

    auto nonsense = run_cli({"sweep", "--scenario", "magic:7"});
    REQUIRE(nonsense.code == 1);
}

TEST_CASE("frames round trip through the command surface") {
    std::vector<std::string> enc_args = {"frame-encode", "--key", "k", "--mcs", "0", "--seq",
                                         "3",  "--r", "9", "--payload-hex", "deadbeef",
                                         "--seed", "5"};
    auto enc = run_cli(enc_args);
    REQUIRE(enc.code == 0);
    auto hex = lines_of(enc.out).at(0);
    REQUIRE(hex.size() > 100);

    auto enc_again = run_cli(enc_args);
    REQUIRE(enc_again.out == enc.out);

    auto dec = run_cli({"frame-decode", "--key", "k", "--frame", hex});
    REQUIRE(dec.code == 0);
    auto lines = lines_of(dec.out);
    REQUIRE(lines[0] == "mcs_id,seq,payload_len,r,payload_hex");
    REQUIRE(lines[1] == "0,3,32,9,deadbeef");

    auto wrong = run_cli({"frame-decode", "--key", "notk", "--frame", hex});
    REQUIRE(wrong.code == 1);
    REQUIRE(wrong.err.find("authentication") != std::string::npos);

    auto in_file = [&] {
        const char* path = "cli_test_frame.hex";
        {
            std::ofstream f(path);
            f << hex << '\n';
        }
        auto r2 = run_cli({"frame-decode", "--key", "k", "--in", path});
        std::remove(path);
        return r2;
    }();
    REQUIRE(in_file.out == dec.out);

    auto neither = run_cli({"frame-decode", "--key", "k"});
    REQUIRE(neither.code == 1);
}

TEST_CASE("frame-encode respects --bits and rejects junk") {
    auto r = run_cli({"frame-encode", "--key", "k", "--mcs", "0", "--payload-hex", "ff",
                      "--bits", "3"});
    REQUIRE(r.code == 0);
    auto dec = run_cli({"frame-decode", "--key", "k", "--frame", lines_of(r.out)[0]});
    REQUIRE(lines_of(dec.out)[1].substr(0, 6) == "0,0,3,");

    auto too_many = run_cli({"frame-encode", "--key", "k", "--mcs", "0", "--payload-hex",
                             "ff", "--bits", "9"});
    REQUIRE(too_many.code == 1);

    auto bad_hex = run_cli({"frame-encode", "--key", "k", "--mcs", "0", "--payload-hex", "xy"});
    REQUIRE(bad_hex.code == 1);

    auto bad_mcs = run_cli({"frame-encode", "--key", "k", "--mcs", "500", "--payload-hex", "00"});
    REQUIRE(bad_mcs.code == 1);
}

TEST_CASE("interleave-demo prints the derived permutation") {
    auto r = run_cli({"interleave-demo", "--key", "k", "--packet", "1", "--block", "0",
                      "--m", "251"});
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines[0] == "# a=116 b=121 m=251");
    REQUIRE(lines[1] == "position,source");
    REQUIRE(lines.size() == 2 + 251);

    auto small = run_cli({"interleave-demo", "--key", "k", "--m", "5"});
    auto small_lines = lines_of(small.out);
    std::set<std::string> sources;
    for (size_t i = 2; i < small_lines.size(); ++i) {
        auto comma = small_lines[i].find(',');
        REQUIRE(small_lines[i].substr(0, comma) == std::to_string(i - 2));
        sources.insert(small_lines[i].substr(comma + 1));
    }
    REQUIRE(sources == std::set<std::string>{"0", "1", "2", "3", "4"});

    auto composite = run_cli({"interleave-demo", "--key", "k", "--m", "10"});
    REQUIRE(composite.code == 1);
}
