#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

const fs::path& scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "tgsketch_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CommandResult run_cli(const std::string& args) {
  const fs::path out_file = scratch_dir() / "cmd_output.txt";
  const std::string cmd =
      std::string(TGSKETCH_BIN) + " " + args + " >" + out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CommandResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

std::string write_file(const std::string& name, const std::string& content) {
  const fs::path path = scratch_dir() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string toy_edges() { return write_file("toy.edges", "a b 1\na c 2\nb c 3\n"); }

}  // namespace

TEST_CASE("embed writes sketches of the requested shape") {
  const std::string edges = toy_edges();
  const std::string out = (scratch_dir() / "toy.sparse").string();
  auto r = run_cli("embed --input " + edges + " --output " + out +
                   " --format sparse --dim 8 --max-dt 1 --walk-length 5");
  REQUIRE(r.exit_code == 0);

  std::ifstream in(out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    rows++;
    // "label: b1 b2 ..." with bit indices below 8
    auto colon = line.find(':');
    REQUIRE(colon != std::string::npos);
    std::istringstream bits(line.substr(colon + 1));
    int bit;
    while (bits >> bit) {
      CHECK(bit >= 0);
      CHECK(bit < 8);
    }
  }
  CHECK(rows == 3);

  const std::string packed = (scratch_dir() / "toy.packed").string();
  auto r2 = run_cli("embed --input " + edges + " --output " + packed +
                    " --dim 8 --max-dt 1 --walk-length 5");
  REQUIRE(r2.exit_code == 0);
  CHECK(std::filesystem::file_size(packed) == 28 + 3 * 1);  // header + 3 rows x 1 byte
}

TEST_CASE("manifest replay reproduces outputs byte for byte") {
  const std::string edges = toy_edges();
  const std::string out = (scratch_dir() / "replay.sk").string();
  auto r = run_cli("embed --input " + edges + " --output " + out +
                   " --dim 16 --max-dt 2 --walk-length 6 --seed 9");
  REQUIRE(r.exit_code == 0);
  const std::string sketches = slurp(out);
  const std::string planes = slurp(out + ".planes");
  REQUIRE(!sketches.empty());

  auto replay = run_cli("--config " + out + ".manifest");
  REQUIRE(replay.exit_code == 0);
  CHECK(slurp(out) == sketches);
  CHECK(slurp(out + ".planes") == planes);
}

TEST_CASE("flags win over the config file") {
  const std::string edges = toy_edges();
  const std::string out1 = (scratch_dir() / "cfg1.sk").string();
  auto r = run_cli("embed --input " + edges + " --output " + out1 +
                   " --dim 16 --max-dt 2 --walk-length 6 --seed 9");
  REQUIRE(r.exit_code == 0);
  const std::string out2 = (scratch_dir() / "cfg2.sk").string();
  auto r2 = run_cli("--config " + out1 + ".manifest embed --output " + out2 + " --seed 10");
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(out1) != slurp(out2));  // different seed, same everything else
}

TEST_CASE("usage and validation exit codes") {
  SUBCASE("missing required input is a usage error") {
    auto r = run_cli("embed --output x.sk");
    CHECK(r.exit_code == 1);
  }
  SUBCASE("unknown subcommand is a usage error") {
    auto r = run_cli("frobnicate");
    CHECK(r.exit_code == 1);
  }
  SUBCASE("temporal policy on a static edge list is a validation error") {
    const std::string edges = write_file("static.edges", "a b\nb c\n");
    auto r = run_cli("embed --input " + edges + " --schema \"src dst\" --output " +
                     (scratch_dir() / "x.sk").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("config") != std::string::npos);
  }
  SUBCASE("malformed edge line names the stage and line") {
    const std::string edges = write_file("bad.edges", "a b 1\na b\n");
    auto r = run_cli("embed --input " + edges + " --output " +
                     (scratch_dir() / "y.sk").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("graph") != std::string::npos);
    CHECK(r.output.find("line 2") != std::string::npos);
  }
  SUBCASE("missing file is a validation error") {
    auto r = run_cli("embed --input /nonexistent.edges --output " +
                     (scratch_dir() / "z.sk").string());
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("replicas command emits the perturbed graph and ground truth") {
  std::ostringstream text;
  for (int i = 0; i < 20; ++i) text << "hub leaf" << i << " " << i << "\n";
  const std::string edges = write_file("star.edges", text.str());
  const std::string prefix = (scratch_dir() / "star_rep").string();
  auto r = run_cli("replicas --input " + edges + " --output " + prefix +
                   " --fraction 0.05 --p1 0.5 --p2 0.5 --seed 4");
  REQUIRE(r.exit_code == 0);
  const std::string truth = slurp(prefix + ".truth");
  CHECK(truth == "hub\thub~rep\n");
  const std::string perturbed = slurp(prefix + ".edges");
  CHECK(perturbed.find("hub~rep") != std::string::npos);

  // The perturbed edge list reloads through the embed pipeline.
  const std::string out = (scratch_dir() / "star_rep.sk").string();
  auto r2 = run_cli("embed --input " + prefix + ".edges --output " + out + " --dim 16");
  CHECK(r2.exit_code == 0);
}

TEST_CASE("eval command reports metrics") {
  // Small deterministic scale-free-ish graph.
  std::ostringstream text;
  unsigned state = 12345;
  auto next = [&state](unsigned mod) {
    state = state * 1103515245u + 12345u;
    return (state >> 16) % mod;
  };
  for (int i = 0; i < 400; ++i) {
    unsigned u = next(60);
    unsigned v = next(i < 200 ? 25 : 60);
    if (u == v) v = (v + 1) % 60;
    text << "n" << u << " n" << v << " " << next(100000) << "\n";
  }
  const std::string edges = write_file("eval.edges", text.str());
  auto r = run_cli("eval --input " + edges +
                   " --directed --dim 32 --walks 5 --walk-length 8 --seed 3 --manifest " +
                   (scratch_dir() / "eval.manifest").string() + " --json " +
                   (scratch_dir() / "metrics.json").string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("auc=") != std::string::npos);
  CHECK(r.output.find("acc=") != std::string::npos);
  CHECK(r.output.find("f1=") != std::string::npos);
  const std::string json = slurp((scratch_dir() / "metrics.json").string());
  CHECK(json.find("\"auc\"") != std::string::npos);
}

TEST_CASE("stitch and buckets commands work from stored sketches") {
  const std::string edges = toy_edges();
  const std::string out = (scratch_dir() / "st.sk").string();
  auto r = run_cli("embed --input " + edges + " --output " + out +
                   " --dim 16 --max-dt 2 --walk-length 6");
  REQUIRE(r.exit_code == 0);

  const std::string pairs = write_file("queries.pairs", "a\ta\t1\na\tb\t0\n");
  const std::string manifest = " --manifest " + (scratch_dir() / "st.manifest").string();
  auto r2 = run_cli("stitch --sketches " + out + " --pairs " + pairs +
                    " --band-bits 4" + manifest + " --candidates-out " +
                    (scratch_dir() / "cands.tsv").string());
  REQUIRE(r2.exit_code == 0);
  CHECK(r2.output.find("acc=") != std::string::npos);
  CHECK(r2.output.find("candidates=") != std::string::npos);

  auto r3 = run_cli("buckets --sketches " + out + " --band-bits 4 --output " +
                    (scratch_dir() / "pairs.tsv").string());
  CHECK(r3.exit_code == 0);
}

TEST_CASE("stitch runs the full replica pipeline from an edge list") {
  std::ostringstream text;
  unsigned state = 777;
  auto next = [&state](unsigned mod) {
    state = state * 1103515245u + 12345u;
    return (state >> 16) % mod;
  };
  for (int i = 0; i < 300; ++i) {
    unsigned u = next(50);
    unsigned v = next(i < 150 ? 20 : 50);
    if (u == v) v = (v + 1) % 50;
    text << "n" << u << " n" << v << " " << next(9999) << "\n";
  }
  const std::string edges = write_file("stitch.edges", text.str());
  const std::string manifest = " --manifest " + (scratch_dir() / "sp.manifest").string();
  auto r = run_cli("stitch --input " + edges +
                   " --directed --dim 33 --walks 4 --walk-length 6 --band-bits 4 --seed 2" +
                   manifest);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("f1=") != std::string::npos);
  auto r2 = run_cli("stitch --input " + edges +
                    " --directed --dim 33 --walks 4 --walk-length 6 --band-bits 4 --seed 2" +
                    manifest);
  CHECK(r.output == r2.output);  // repeated run, same seed, same candidates
}
