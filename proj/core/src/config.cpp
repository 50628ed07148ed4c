#include "segeval/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace segeval {

void EvalConfig::validate() const {
    auto require = [](bool ok, const std::string& why) {
        if (!ok) throw ConfigError("config: " + why);
    };
    require(binarize_threshold > 0.0 && binarize_threshold < 1.0,
            "binarize.threshold must lie in (0,1)");
    require(boundary.canny_sigma > 0.0, "canny.sigma must be > 0");
    require(boundary.canny_low >= 0.0 && boundary.canny_high >= boundary.canny_low &&
                boundary.canny_high <= 1.0,
            "require 0 <= canny.low <= canny.high <= 1");
    require(hd95_percentile > 0.0 && hd95_percentile <= 1.0,
            "hd95.percentile must lie in (0,1]");
    require(preprocess_width >= 0 && preprocess_height >= 0,
            "preprocess dimensions must be >= 0");
    require((preprocess_width == 0) == (preprocess_height == 0),
            "preprocess.width and preprocess.height must be set together");
    try {
        ssim.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

namespace {

double parse_double(const std::string& v, const std::string& key, size_t line) {
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line) + ": value of '" +
                          key + "' is not a number: '" + v + "'");
    }
}

int parse_int(const std::string& v, const std::string& key, size_t line) {
    try {
        size_t used = 0;
        const int i = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line) + ": value of '" +
                          key + "' is not an integer: '" + v + "'");
    }
}

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    const size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

} // namespace

EvalConfig parse_config(const std::string& text) {
    EvalConfig cfg;
    bool weights_given = false;
    std::vector<double> weights;

    std::istringstream in(text);
    std::string raw;
    size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "binarize.threshold") {
            cfg.binarize_threshold = parse_double(value, key, line_no);
        } else if (key == "contour.extractor") {
            if (value == "canny")
                cfg.boundary.extractor = ContourExtractor::Canny;
            else if (value == "morph")
                cfg.boundary.extractor = ContourExtractor::Morph;
            else
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": contour.extractor must be canny or morph");
        } else if (key == "canny.sigma") {
            cfg.boundary.canny_sigma = parse_double(value, key, line_no);
        } else if (key == "canny.low") {
            cfg.boundary.canny_low = parse_double(value, key, line_no);
        } else if (key == "canny.high") {
            cfg.boundary.canny_high = parse_double(value, key, line_no);
        } else if (key == "ssim.scales") {
            cfg.ssim.scales = parse_int(value, key, line_no);
        } else if (key == "ssim.weights") {
            weights.clear();
            std::istringstream ws(value);
            std::string tok;
            while (std::getline(ws, tok, ','))
                weights.push_back(parse_double(trim(tok), key, line_no));
            weights_given = true;
        } else if (key == "ssim.window") {
            cfg.ssim.window = parse_int(value, key, line_no);
        } else if (key == "ssim.window_sigma") {
            cfg.ssim.window_sigma = parse_double(value, key, line_no);
        } else if (key == "ssim.k1") {
            const double k1 = parse_double(value, key, line_no);
            cfg.ssim.c1 = (k1 * cfg.ssim.dynamic_range) * (k1 * cfg.ssim.dynamic_range);
        } else if (key == "ssim.k2") {
            const double k2 = parse_double(value, key, line_no);
            cfg.ssim.c2 = (k2 * cfg.ssim.dynamic_range) * (k2 * cfg.ssim.dynamic_range);
            cfg.ssim.c3 = cfg.ssim.c2 / 2.0;
        } else if (key == "ssim.dynamic_range") {
            const double prev = cfg.ssim.dynamic_range;
            const double range = parse_double(value, key, line_no);
            // Rescale the stabilizers with the range so k1/k2 keep meaning.
            const double ratio = range / prev;
            cfg.ssim.c1 *= ratio * ratio;
            cfg.ssim.c2 *= ratio * ratio;
            cfg.ssim.c3 = cfg.ssim.c2 / 2.0;
            cfg.ssim.dynamic_range = range;
        } else if (key == "hd95.percentile") {
            cfg.hd95_percentile = parse_double(value, key, line_no);
        } else if (key == "percentile.method") {
            if (value == "linear")
                cfg.percentile_method = PercentileMethod::Linear;
            else if (value == "lower")
                cfg.percentile_method = PercentileMethod::Lower;
            else if (value == "nearest")
                cfg.percentile_method = PercentileMethod::Nearest;
            else
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": percentile.method must be linear, lower, or nearest");
        } else if (key == "preprocess.width") {
            cfg.preprocess_width = parse_int(value, key, line_no);
        } else if (key == "preprocess.height") {
            cfg.preprocess_height = parse_int(value, key, line_no);
        } else {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
    }

    if (weights_given) {
        cfg.ssim.weights = std::move(weights);
    } else if (cfg.ssim.scales != 5) {
        cfg.ssim.weights.assign(static_cast<size_t>(cfg.ssim.scales),
                                1.0 / cfg.ssim.scales);
    }
    cfg.validate();
    return cfg;
}

EvalConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": unreadable config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_fingerprint(const std::string& text) {
    if (text.empty()) return "default";
    std::uint64_t h = 1469598103934665603ull; // FNV-1a 64
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace segeval
