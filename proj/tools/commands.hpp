#pragma once

#include <string>
#include <vector>

#include "rfsep/config.hpp"

namespace rfsep::cli {

struct Common {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir = ".";
    bool full = false;
    int threads = 0;
};

// builds the effective config: file, then --full scaling, then flag overrides
config::RunConfig load_config(const Common& c);

int cmd_gen(const Common& c, bool binary);
int cmd_separate(const Common& c, const std::string& mixture_file, const std::string& meta_file,
                 const std::string& truth_file);
int cmd_sweep(const Common& c, const std::vector<double>& sirs, int trials, const std::vector<std::string>& methods,
              bool no_timing);
int cmd_ablation(const Common& c, const std::vector<double>& sirs, int trials, bool no_timing);
int cmd_landscape(const Common& c, const std::string& which);
int cmd_score_check(const Common& c, const std::string& fixtures, const std::string& dump_dir);
int cmd_cov(const Common& c);

std::string help_keys();

}  // namespace rfsep::cli
