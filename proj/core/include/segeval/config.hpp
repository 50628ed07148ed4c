#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "segeval/boundary.hpp"
#include "segeval/structural.hpp"

namespace segeval {

/// Every tunable of the evaluation pipeline, with the documented defaults.
/// Loadable from a flat `key = value` config file (# starts a comment):
///
///   binarize.threshold   mask binarization threshold in (0,1)      [0.5]
///   contour.extractor    canny | morph                             [canny]
///   canny.sigma          Gaussian sigma for edge extraction        [0.5]
///   canny.low            low hysteresis fraction of max gradient   [0.1]
///   canny.high           high hysteresis fraction                  [0.3]
///   ssim.scales          MS-SSIM scale count M                     [5]
///   ssim.weights         comma list of per-scale exponents         [standard 5]
///   ssim.window          Gaussian window size                      [11]
///   ssim.window_sigma    Gaussian window sigma                     [1.5]
///   ssim.k1 / ssim.k2    stabilizer factors (C1=(k1 L)^2 etc.)     [0.01 / 0.03]
///   ssim.dynamic_range   data range L                              [1.0]
///   hd95.percentile      robust Hausdorff quantile                 [0.95]
///   percentile.method    linear | lower | nearest                  [linear]
///   preprocess.width     resize inputs before evaluation; 0 = off  [0]
///   preprocess.height                                              [0]
///
/// When ssim.scales differs from 5 and ssim.weights is not given, weights
/// default to uniform 1/M.
struct EvalConfig {
    double binarize_threshold = 0.5;
    BoundaryConfig boundary;
    SsimConfig ssim = SsimConfig::defaults();
    double hd95_percentile = 0.95;
    PercentileMethod percentile_method = PercentileMethod::Linear;
    int preprocess_width = 0;
    int preprocess_height = 0;

    void validate() const; // throws ConfigError
};

/// Parse config text. Unknown keys and unparsable values throw ConfigError
/// with the offending line number.
EvalConfig parse_config(const std::string& text);
EvalConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64-bit hash of the config file text ("default" when no file was
/// given); recorded in run metadata.
std::string config_fingerprint(const std::string& text);

} // namespace segeval
