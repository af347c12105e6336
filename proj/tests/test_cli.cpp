#include "isde/io.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Workspace
{
  fs::path dir;

  Workspace()
  {
    dir = fs::temp_directory_path() /
          ("isde_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  static int& counter()
  {
    static int n = 0;
    return n;
  }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  void write(const std::string& name, const std::string& text) const
  {
    std::ofstream(path(name)) << text;
  }

  std::string read(const std::string& name) const
  {
    std::ifstream in(path(name));
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int run(const std::string& args) const
  {
    const std::string cmd = std::string(ISDE_CLI_PATH) + " " + args + " >" +
                            path("stdout.txt") + " 2>" + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

} // namespace

TEST_SUITE("cli")
{
  TEST_CASE("synth, fit and eval")
  {
    Workspace ws;
    REQUIRE(ws.run("synth --d 4 --kstar 2 --sigma 0.7 --epsilon 0 --n 1500 --seed 5 --header "
                   "--output " + ws.path("data.csv")) == 0);
    REQUIRE(ws.run("fit --input " + ws.path("data.csv") + " --k 2 --output " +
                   ws.path("model.json") + " --dp-dump " + ws.path("dp.json")) == 0);
    const auto model = isde::Json::parse(ws.read("model.json"));
    CHECK(model.at("partition").dump() == "[[1,2],[3,4]]");
    CHECK(isde::Json::parse(ws.read("dp.json")).size() == 16);

    ws.write("points.csv", "0.5,0.5,0.5,0.5\n0.1,0.9,0.2,0.3\n");
    REQUIRE(ws.run("eval --model " + ws.path("model.json") + " --points " +
                   ws.path("points.csv")) == 0);
    std::istringstream out(ws.read("stdout.txt"));
    double a = 0, b = 0;
    out >> a >> b;
    CHECK(a > 0.0);
    CHECK(b > 0.0);
  }

  TEST_CASE("rescale flag stores the affine map")
  {
    Workspace ws;
    ws.write("raw.csv", "a,b\n10,1\n12,3\n11,2\n13,0\n10.5,2.5\n12.5,1.5\n");
    CHECK(ws.run("fit --input " + ws.path("raw.csv") + " --k 1") == 3);
    REQUIRE(ws.run("fit --input " + ws.path("raw.csv") + " --k 1 --rescale --output " +
                   ws.path("m.json")) == 0);
    const auto j = isde::Json::parse(ws.read("m.json"));
    CHECK(j.at("rescale").at("min").dump() == "[10.0,0.0]");
    CHECK(j.at("rescale").at("max").dump() == "[13.0,3.0]");
  }

  TEST_CASE("exit codes")
  {
    Workspace ws;
    ws.write("ok.csv", "0.1,0.2\n0.3,0.4\n0.5,0.6\n0.7,0.8\n");
    ws.write("bad.csv", "0.1,0.2\n0.3,oops\n");
    CHECK(ws.run("fit --input " + ws.path("ok.csv") + " --k 1") == 0);
    CHECK(ws.run("fit --input " + ws.path("ok.csv") + " --k 3") == 2);
    CHECK(ws.run("fit --input " + ws.path("ok.csv") + " --k 1 --kernel cosine") == 2);
    CHECK(ws.run("fit --input " + ws.path("ok.csv")) == 2);
    CHECK(ws.run("fit --input " + ws.path("bad.csv") + " --k 1") == 3);
    CHECK(ws.read("stderr.txt").find("row 2") != std::string::npos);
    CHECK(ws.run("fit --input " + ws.path("missing.csv") + " --k 1") == 3);
    CHECK(ws.run("bogus") == 2);
    CHECK(ws.run("synth --d 4 --kstar 3 --sigma 0.5 --epsilon 0 --n 10") == 2);
    CHECK(ws.run("--help") == 0);
  }

  TEST_CASE("oracle tables")
  {
    Workspace ws;
    REQUIRE(ws.run("oracle --d 4 --sigma 0.3 --epsilon 0.01 --output " + ws.path("o.json")) == 0);
    const auto rows = isde::Json::parse(ws.read("o.json"));
    bool found = false;
    for (const auto& r : rows)
      if (r.at("kstar") == 2) {
        found = true;
        CHECK(r.at("kl_exact").get<double>() ==
              doctest::Approx(1.1835720258840995e-4).epsilon(1e-9));
        CHECK(r.at("det_block_perturbed").get<double>() == doctest::Approx(0.827904));
      }
    CHECK(found);
    REQUIRE(ws.run("oracle --d 3 --format csv") == 0);
    CHECK(ws.read("stdout.txt").rfind("d,kstar,sigma", 0) == 0);
  }

  TEST_CASE("diagnose reports theory bounds")
  {
    Workspace ws;
    REQUIRE(ws.run("diagnose --d 4 --kstar 2 --sigma 0.5 --epsilon 0.05 --n 600 --n-mc 2000 "
                   "--estimate-A --output " + ws.path("d.json")) == 0);
    const auto j = isde::Json::parse(ws.read("d.json"));
    CHECK(j.at("theory").contains("selection_bound"));
    CHECK(j.at("theory").at("final_bound").contains("total"));
    CHECK(j.at("heuristic_A").at("note").get<std::string>().find("heuristic") == 0);
    CHECK(j.at("report").contains("slack"));
    CHECK(ws.run("diagnose --truth nope") == 2);
  }
}
