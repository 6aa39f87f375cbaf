#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "lpdec/polytope.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Sandbox {
public:
    Sandbox() {
        dir_ = fs::temp_directory_path() / ("lpdec_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    ~Sandbox() { fs::remove_all(dir_); }

    Run run(const std::string& args) const {
        const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
        const std::string cmd = "cd '" + dir_.string() + "' && '" + std::string(LPDEC_CLI_PATH) + "' " + args +
                                " >'" + out.string() + "' 2>'" + err.string() + "'";
        const int raw = std::system(cmd.c_str());
        Run r;
        r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

    fs::path path(const std::string& name) const { return dir_ / name; }

private:
    fs::path dir_;
};

}  // namespace

TEST_CASE("cli: polytope writes the Hamming(7,4) facet file") {
    Sandbox box;
    const Run r = box.run("polytope --hamming74");
    CHECK(r.status == 0);
    CHECK(r.out.find("facets=70") != std::string::npos);
    const auto got = lpdec::load_facet_file(box.path("facets.txt").string());
    const auto ref = lpdec::load_facet_file(std::string(LPDEC_TEST_DATA_DIR) + "/hamming74_facets.txt");
    CHECK(lpdec::same_row_set(got.rays, ref.rays));

    CHECK(box.run("polytope --spc-gf4-n4 --out gf4.txt").status == 0);
    CHECK(lpdec::load_facet_file(box.path("gf4.txt").string()).rays.size() == 40);
}

TEST_CASE("cli: mindist prints both bounds and writes the branch CSV") {
    Sandbox box;
    REQUIRE(box.run("gencode --gallager 20 3 4 --seed 7 --out code.alist").status == 0);
    const Run r = box.run("mindist --code code.alist --seed 7");
    CHECK(r.status == 0);
    CHECK(r.out.find("l_min_lower=") != std::string::npos);
    CHECK(r.out.find("l_min_upper=") != std::string::npos);
    const std::string csv = slurp(box.path("mindist.csv"));
    CHECK(csv.rfind("kind,r,branch,lower,upper,iterations\n", 0) == 0);
    CHECK(csv.find("\nsummary,-1,-1,") != std::string::npos);
}

TEST_CASE("cli: identical invocations write identical files") {
    Sandbox box;
    REQUIRE(box.run("gencode --gallager 20 3 4 --seed 3 --out code.alist").status == 0);
    for (const std::string cmd : {"mindist --code code.alist --out a.csv --threads 2",
                                  "simulate --code code.alist --p 0.05 --trials 40 --decoder lp --decoder bp "
                                  "--decoder lp-merged --seed 1 --out a.csv",
                                  "fracdist --code code.alist --out a.csv", "merge --code code.alist --out a.csv",
                                  "decode --code code.alist --p 0.08 --seed 4 --out a.csv"}) {
        CAPTURE(cmd);
        REQUIRE(box.run(cmd).status == 0);
        const std::string first = slurp(box.path("a.csv"));
        std::string second_cmd = cmd;
        second_cmd.replace(second_cmd.find("a.csv"), 5, "b.csv");
        REQUIRE(box.run(second_cmd).status == 0);
        CHECK(first == slurp(box.path("b.csv")));
        CHECK_FALSE(first.empty());
    }
    const std::string sim = "simulate --code code.alist --p 0.045 --trials 30 --decoder lp-merged --seed 1 --out s.csv";
    REQUIRE(box.run(sim).status == 0);
    const std::string csv = slurp(box.path("s.csv"));
    CHECK(csv.rfind("p,trials,word_errors,wer,stderr,ml_cert_rate,mean_iters,decoder\n0.045,30,", 0) == 0);
    CHECK(csv.find(",lp-merged\n") != std::string::npos);
}

TEST_CASE("cli: exit codes and messages") {
    Sandbox box;
    const Run unknown = box.run("mindist --hamming74 --bogus");
    CHECK(unknown.status == 1);
    CHECK(unknown.err.find("--bogus") != std::string::npos);

    const Run missing = box.run("mindist --code does_not_exist.alist");
    CHECK(missing.status == 1);
    CHECK(missing.err.find("does_not_exist.alist") != std::string::npos);

    CHECK(box.run("").status == 1);
    CHECK(box.run("mindist").status == 1);
    CHECK(box.run("decode --hamming74").status == 1);

    {
        std::ofstream bad(box.path("bad.alist"));
        bad << "3 1\n1 3\n1 1 1\n";
    }
    const Run malformed = box.run("mindist --code bad.alist");
    CHECK(malformed.status == 2);
    CHECK(malformed.err.find("malformed input") != std::string::npos);

    const Run cap = box.run("oracle --gallager 60 3 6");
    CHECK(cap.status == 2);
    CHECK(cap.err.find("cap exceeded") != std::string::npos);

    CHECK(box.run("mindist --hamming74 --K0 -5").status == 1);
}

TEST_CASE("cli: oracle and decode on a small code") {
    Sandbox box;
    const Run o = box.run("oracle --hamming74");
    CHECK(o.status == 0);
    CHECK(o.out.find("d_min=3") != std::string::npos);
    {
        std::ofstream llr(box.path("g.txt"));
        llr << "1 2 -3 0.5 0.5 0.5 0.5\n";
    }
    const Run d = box.run("decode --hamming74 --llr g.txt");
    CHECK(d.status == 0);
    CHECK(d.out.find("ml_certificate=") != std::string::npos);
}
