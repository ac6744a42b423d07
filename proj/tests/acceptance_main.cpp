// Acceptance suite: runs the reference battery through the CLI twice with a
// fixed seed, relays one pass/fail line per criterion, and verifies that the
// two battery reports are byte-identical apart from the timestamp line.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(CQED_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::vector<std::string> lines_without_timestamp(const fs::path& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("generated_at") != std::string::npos) continue;
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / "cqed_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    const fs::path dir_a = work / "run_a";
    const fs::path dir_b = work / "run_b";

    std::cout << "running reference battery (run A)...\n" << std::flush;
    const int code_a =
        run_cli("reproduce --seed 4242 --out " + dir_a.string(), work / "run_a.log");
    std::cout << "running reference battery (run B)...\n" << std::flush;
    const int code_b =
        run_cli("reproduce --seed 4242 --out " + dir_b.string(), work / "run_b.log");

    // Relay the per-criterion battery log so the acceptance output carries
    // one line per criterion with its measured values.
    {
        std::ifstream log(work / "run_a.log");
        std::string line;
        while (std::getline(log, line)) {
            if (line.rfind("[PASS]", 0) == 0 || line.rfind("[FAIL]", 0) == 0) {
                std::cout << line << "\n";
            }
        }
    }

    int failures = 0;
    nlohmann::json report;
    try {
        std::ifstream in(dir_a / "report.json");
        in >> report;
        for (const auto& row : report.at("criteria")) {
            if (!row.at("pass").get<bool>()) ++failures;
        }
    } catch (const std::exception& e) {
        std::cout << "[FAIL] criterion report unreadable: " << e.what() << "\n";
        ++failures;
    }

    if (code_a != 0 || code_b != 0) {
        std::cout << "[FAIL] reproduce exit codes: " << code_a << ", " << code_b
                  << " (0 expected when all criteria pass)\n";
        ++failures;
    }

    // Criterion 12, strong form: byte-identical reports excluding the
    // timestamp line.
    {
        const std::vector<std::string> a = lines_without_timestamp(dir_a / "report.json");
        const std::vector<std::string> b = lines_without_timestamp(dir_b / "report.json");
        const bool identical = !a.empty() && a == b;
        std::cout << (identical ? "[PASS] " : "[FAIL] ")
                  << "criterion 12 reproduce_byte_determinism: two seeded runs, "
                  << a.size() << " non-timestamp report lines compared\n";
        if (!identical) ++failures;
    }

    std::cout << (failures == 0 ? "acceptance suite: all criteria passed\n"
                                : "acceptance suite: FAILURES present\n");
    return failures == 0 ? 0 : 1;
}
