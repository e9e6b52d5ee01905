// End-to-end checks of the qpath binary: output rows, exit codes, and
// byte-level determinism. argv[1] is the path to the binary under test.
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAILED: " << what << "\n";
  }
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

/// Runs a shell command, capturing stdout (callers append 2>&1 when they
/// want stderr too).
RunResult run(const std::string& cmd) {
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    ++failures;
    std::cerr << "FAILED to launch: " << cmd << "\n";
    return res;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

/// Value of the CSV row whose first column is `path`, or NaN if absent.
double row_value(const std::string& output, const std::string& path) {
  std::string key = "\n" + path + ",";
  std::size_t pos = output.find(key);
  if (pos == std::string::npos) return std::nan("");
  return std::strtod(output.c_str() + pos + key.size(), nullptr);
}

void check_row(const std::string& output, const std::string& path,
               double want, const std::string& what) {
  double got = row_value(output, path);
  check(std::fabs(got - want) <= 1e-12, what);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <qpath-binary>\n";
    return 2;
  }
  const std::string bin = std::string("\"") + argv[1] + "\"";
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "qpath_cli_tests";
  fs::create_directories(dir);

  const fs::path hadamard = dir / "hadamard.json";
  write_file(hadamard, R"({
    "version": 1,
    "rho": {"matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]},
    "times": [
      {"label": "t0"},
      {"label": "t1",
       "unitary": {"matrix": [
         [[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]],
         [[0.7071067811865476, 0.0], [-0.7071067811865476, 0.0]]]}}
    ]
  })");

  // exact: ground state through a Hadamard splits the second outcome 50/50
  {
    RunResult r = run(bin + " exact \"" + hadamard.string() + "\"");
    check(r.exit_code == 0, "exact exits 0");
    check(contains(r.output, "# method: eq1"), "exact echoes the method");
    check_row(r.output, "0-0", 0.5, "row 0-0 = 0.5");
    check_row(r.output, "0-1", 0.5, "row 0-1 = 0.5");
    check_row(r.output, "1-0", 0.0, "row 1-0 = 0");
    check_row(r.output, "1-1", 0.0, "row 1-1 = 0");
  }

  // every route agrees; the file reports the max pairwise deviation
  {
    RunResult r =
        run(bin + " exact \"" + hadamard.string() + "\" --compare-all");
    check(r.exit_code == 0, "compare-all exits 0");
    check(contains(r.output, "path,eq1,postselect,broadcast,povm"),
          "compare-all lists all four routes");
    std::size_t pos = r.output.find("# max_pairwise_deviation: ");
    check(pos != std::string::npos, "deviation line present");
    if (pos != std::string::npos) {
      double dev = std::strtod(
          r.output.c_str() + pos + sizeof("# max_pairwise_deviation: ") - 1,
          nullptr);
      check(dev < 1e-10, "routes agree within 1e-10");
    }
  }

  // alternate routes match the eq1 rows
  for (const char* method : {"postselect", "broadcast", "povm"}) {
    RunResult r = run(bin + " exact \"" + hadamard.string() +
                      "\" --method " + method);
    check(r.exit_code == 0, std::string(method) + " exits 0");
    check_row(r.output, "0-1", 0.5, std::string(method) + " row 0-1 = 0.5");
  }

  // determinism: identical commands give identical bytes
  {
    std::string cmd = bin + " sample \"" + hadamard.string() +
                      "\" --shots 5000 --seed 7";
    RunResult r1 = run(cmd);
    RunResult r2 = run(cmd);
    check(r1.exit_code == 0, "sample exits 0");
    check(r1.output == r2.output, "sample reruns are byte-identical");
    check(contains(r1.output, "# seed: 7"), "sample echoes the seed");
    check(contains(r1.output, "# acceptance_rate: 1"),
          "pure state accepts every shot");
    RunResult r3 = run(bin + " sample \"" + hadamard.string() +
                       "\" --shots 5000 --seed 8");
    check(r3.output != r1.output, "different seed changes the estimates");
  }

  // check: model files carry their own energies and temperature
  {
    const fs::path qubit = dir / "qubit.json";
    write_file(qubit, R"({
      "rho": {"model": "coherent_qubit",
              "params": {"beta": 1.0, "g0": 1.0, "g1": 2.0, "a": 0.0}}
    })");
    RunResult thermal = run(bin + " check \"" + qubit.string() + "\"");
    check(thermal.exit_code == 0, "thermal qubit check exits 0");
    check(contains(thermal.output, "povm: PASS"), "povm check passes");
    check(contains(thermal.output, "first_law: PASS"), "first law passes");
    check(contains(thermal.output, "jarzynski: PASS"),
          "fluctuation theorem passes on the thermal state");
    check(contains(thermal.output, "overall: PASS"), "aggregate pass");

    const fs::path coherent = dir / "qubit_coherent.json";
    write_file(coherent, R"({
      "rho": {"model": "coherent_qubit", "params": {"a": 0.5}}
    })");
    RunResult coh = run(bin + " check \"" + coherent.string() + "\"");
    check(coh.exit_code == 0, "coherent qubit check exits 0");
    check(contains(coh.output, "jarzynski: SKIPPED (NotThermalInput"),
          "coherent input skips the fluctuation theorem with a note");
    check(contains(coh.output, "first_law: PASS"),
          "first law still passes with coherence");

    const fs::path pair = dir / "pair.json";
    write_file(pair, R"({
      "rho": {"model": "qubit_pair", "params": {"a": 0.3}}
    })");
    RunResult pr = run(bin + " check \"" + pair.string() + "\"");
    check(pr.exit_code == 0, "qubit pair check exits 0");
    check(contains(pr.output, "povm: PASS"), "pair povm passes");
    check(contains(pr.output, "first_law: PASS"), "pair first law passes");
  }

  // figure: header echoes parameters; a = 0 rows reproduce the baseline
  {
    RunResult r = run(bin + " figure fig2 --a 0 --a 0.5 --points 7");
    check(r.exit_code == 0, "figure exits 0");
    check(contains(r.output, "# name: fig2"), "figure echoes its name");
    check(contains(r.output, "# a: 0,0.5"), "figure echoes the a list");
    check(contains(r.output, "# points: 7"), "figure echoes the grid size");
    check(contains(r.output, "T,a,engine,tpm,analytic,state_ok"),
          "figure column header");
    // 2 a-values x 7 grid points = 14 data rows
    int rows = 0;
    std::size_t pos = r.output.find("state_ok\n");
    if (pos != std::string::npos)
      for (std::size_t i = pos + 9; i < r.output.size(); ++i)
        if (r.output[i] == '\n') ++rows;
    check(rows == 14, "one row per (a, T) pair");

    // a = 0 rows: engine equals the two-point baseline to output precision
    std::istringstream lines(r.output.substr(pos + 9));
    std::string line;
    int a0_rows = 0;
    while (std::getline(lines, line)) {
      std::size_t c1 = line.find(',');
      std::size_t c2 = line.find(',', c1 + 1);
      std::size_t c3 = line.find(',', c2 + 1);
      std::size_t c4 = line.find(',', c3 + 1);
      if (c4 == std::string::npos) continue;
      if (line.substr(c1 + 1, c2 - c1 - 1) != "0") continue;
      ++a0_rows;
      double engine = std::strtod(line.c_str() + c2 + 1, nullptr);
      double tpm = std::strtod(line.c_str() + c3 + 1, nullptr);
      check(std::abs(engine - tpm) <= 1e-12, "a=0 row matches baseline");
    }
    check(a0_rows == 7, "all a=0 rows present");

    RunResult f3 = run(bin + " figure fig3 --points 5");
    check(f3.exit_code == 0, "fig3 exits 0");
    check(contains(f3.output, "# t_a: 0.4"), "fig3 echoes the fixed T_A");
    check(contains(f3.output, "T_B,a,engine,tpm,analytic,state_ok"),
          "fig3 column header");
  }

  // exit code 2: malformed JSON names the line on stderr
  {
    const fs::path broken = dir / "broken.json";
    write_file(broken, "{\n  \"rho\": {\n    \"matrix\": [[\n");
    RunResult r = run(bin + " exact \"" + broken.string() + "\" 2>&1");
    check(r.exit_code == 2, "malformed file exits 2");
    check(contains(r.output, "line"), "parse error names a line");
  }

  // exit code 3: well-formed file that fails validation
  {
    const fs::path bad = dir / "bad_trace.json";
    write_file(bad, R"({
      "rho": {"matrix": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.4, 0.0]]]},
      "times": [{}]
    })");
    RunResult r = run(bin + " exact \"" + bad.string() + "\" 2>&1");
    check(r.exit_code == 3, "validation failure exits 3");
    check(contains(r.output, "TraceNotOne"), "error names the failure");
  }

  // exit code 4: dimension cap exceeded via override
  {
    RunResult r = run(bin + " exact \"" + hadamard.string() +
                      "\" --cap-override 1 2>&1");
    check(r.exit_code == 4, "cap overflow exits 4");
    check(contains(r.output, "DimensionOverflow"), "error names the cap");
  }

  // missing subcommand / unknown flags are usage errors, not crashes
  {
    RunResult r = run(bin + " 2>&1");
    check(r.exit_code != 0, "bare invocation is an error");
    RunResult h = run(bin + " --help");
    check(h.exit_code == 0, "--help exits 0");
    check(contains(h.output, "exact"), "help lists subcommands");
  }

  if (failures == 0) std::cout << "cli_tests: all checks passed\n";
  return failures == 0 ? 0 : 1;
}
