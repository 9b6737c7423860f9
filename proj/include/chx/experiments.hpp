#pragma once

#include "chx/solver.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace chx {

// Random band-limited field with spectral decay |m|^{-s}; fully determined
// by (seed, idx)
Field random_field(const TorusGrid& g, std::uint64_t seed, std::uint64_t idx, double s);

struct ExperimentConfig {
    std::string experiment;
    int d = 1;
    int n = 64;
    std::uint64_t seed = 1;
    int mc = 100;
    std::string out_dir = "out";

    double epsilon = 0.1;
    double alpha = 1.0;
    double r = 2.0;  // integrability for the embedding check
    double t = 0.1;  // observation time for regularity
    double dt = 1e-5;
    double picard_tol = 1e-10;
    double horizon = 0.01;
    std::vector<double> eps_ladder{0.4, 0.2, 0.1};
    double epsilon_ref = 0.05;
    double lemma_alpha = 0.75, lemma_beta = 0.75;
    int qmax = 64;
    double tol = 1e-10;  // verdict tolerance where one applies
};

// parses the json config file; every present key is validated against the
// target experiment's schema and the error message names the offending key
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

struct RunManifest {
    bool pass = false;
    std::vector<std::pair<std::string, std::string>> stats;
    std::string series_path;    // series.csv location
    std::string manifest_path;  // manifest.txt location
};

// executes the named experiment, writes manifest + series.csv (+ field
// dumps where stated) into out_dir
RunManifest run(const ExperimentConfig& config);

const std::vector<std::string>& experiment_names();

}  // namespace chx
