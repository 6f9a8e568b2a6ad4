#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <unistd.h>

#include "lcforge/lcforge.hpp"

namespace lcforge::testing {

inline std::filesystem::path data_dir() { return LCFORGE_TEST_DATA_DIR; }
inline std::filesystem::path templates_dir() { return LCFORGE_TEMPLATES_DIR; }
inline std::filesystem::path samples_dir() { return LCFORGE_SAMPLES_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json read_json(const std::filesystem::path& p) { return Json::parse(read_file(p)); }

/// n distinct-looking lowercase words; "w0 w1 ..." keeps counts trivially checkable.
inline std::string words(std::size_t n, std::string_view stem = "w") {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += std::string(stem) + std::to_string(i);
    }
    return out;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("lcforge-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Gateway + templates + context over one backend. Not movable: the context borrows the gateway.
struct Harness {
    std::shared_ptr<Backend> backend;
    Gateway gateway;
    TemplateRegistry templates = TemplateRegistry::defaults();
    GenerationContext ctx;

    explicit Harness(std::shared_ptr<Backend> b) : backend(b), gateway(b), ctx{gateway, templates} {}
    explicit Harness(Playbook p = {}) : Harness(std::make_shared<MockBackend>(std::move(p))) {}
    explicit Harness(FunctionBackend::Fn fn) : Harness(std::make_shared<FunctionBackend>("scripted", std::move(fn))) {}

    Harness(const Harness&) = delete;
    Harness& operator=(const Harness&) = delete;
};

/// True when some check at exactly `path` failed.
inline bool failed_at(const ValidationReport& r, std::string_view path) {
    for (const auto& c : r.checks) {
        if (!c.pass && c.path == path) return true;
    }
    return false;
}

inline ScenarioSeed sample_seed_value() {
    return ScenarioSeed{"Automated refund processing", "Case task generation",
                        "Produce case tasks for a refunds team", "Brazil"};
}

inline ScenarioText fixed_scenario(std::string text = "A retailer in Lisbon reworks its refund desk.") {
    ScenarioText s;
    s.seed = sample_seed_value();
    s.text = std::move(text);
    s.complexified = true;
    s.scenario_id = make_scenario_id(s.seed, s.text);
    return s;
}

}  // namespace lcforge::testing
