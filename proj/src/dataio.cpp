#include "monoctr/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "monoctr/loss.hpp"

namespace monoctr {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool parses_as_double(const std::string& cell) {
    const char* s = cell.c_str();
    char* end = nullptr;
    double x = std::strtod(s, &end);
    return end != s && *end == '\0' && std::isfinite(x);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

Dataset load_csv(const std::string& path, const FeatureSchema* schema) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.empty()) throw EmptyFile("empty file: " + path);

    Dataset data;
    data.columns = split_line(line);

    std::vector<std::string> num_cols;
    if (schema) {
        for (const auto& f : schema->fields) {
            if (std::find(data.columns.begin(), data.columns.end(), f.name) ==
                data.columns.end())
                throw SchemaMismatch("missing column: " + f.name);
            if (f.kind == FieldKind::Numerical) num_cols.push_back(f.name);
        }
        if (!schema->label_column.empty()) {
            if (std::find(data.columns.begin(), data.columns.end(), schema->label_column) ==
                data.columns.end())
                throw SchemaMismatch("missing label column: " + schema->label_column);
        }
    }

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != data.columns.size())
            throw ParseError("row " + std::to_string(row) + ": expected " +
                             std::to_string(data.columns.size()) + " cells, got " +
                             std::to_string(cells.size()));
        RawRecord rec;
        for (std::size_t c = 0; c < cells.size(); ++c) rec[data.columns[c]] = cells[c];
        if (schema) {
            for (const auto& col : num_cols)
                if (!parses_as_double(rec[col]))
                    throw ParseError("non-numeric value '" + rec[col] + "' in column '" + col +
                                     "' at row " + std::to_string(row));
            if (!schema->label_column.empty()) {
                const std::string& y = rec[schema->label_column];
                if (y != "0" && y != "1")
                    throw ParseError("label must be 0 or 1, got '" + y + "' at row " +
                                     std::to_string(row));
            }
        }
        data.records.push_back(std::move(rec));
        ++row;
    }
    return data;
}

void save_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    for (std::size_t c = 0; c < data.columns.size(); ++c)
        out << (c ? "," : "") << data.columns[c];
    out << "\n";
    for (const auto& rec : data.records) {
        for (std::size_t c = 0; c < data.columns.size(); ++c)
            out << (c ? "," : "") << rec.at(data.columns[c]);
        out << "\n";
    }
}

// ---- synthetic data -------------------------------------------------------

FeatureSchema SyntheticSpec::schema(std::size_t n_buckets) const {
    FeatureSchema s;
    for (std::size_t i = 0; i < cat_vocab_sizes.size(); ++i) {
        FieldSpec f;
        f.name = "cat" + std::to_string(i);
        f.kind = FieldKind::Categorical;
        s.fields.push_back(f);
    }
    for (std::size_t j = 0; j < num_fields.size(); ++j) {
        FieldSpec f;
        f.name = "num" + std::to_string(j);
        f.kind = FieldKind::Numerical;
        f.n_buckets = n_buckets;
        f.direction = num_fields[j].direction;
        s.fields.push_back(f);
    }
    s.label_column = "click";
    return s;
}

double SyntheticTruth::shape_value(std::size_t field, double x) const {
    const SyntheticNumField& f = num_fields[field];
    const double u = std::log1p(x);
    double s = 0.0;
    double lo = 0.0;
    for (std::size_t seg = 0; seg < f.segment_slopes.size(); ++seg) {
        const double hi = seg < f.knots.size() ? f.knots[seg]
                                               : std::numeric_limits<double>::infinity();
        s += f.segment_slopes[seg] * std::clamp(u - lo, 0.0, hi - lo);
        lo = hi;
    }
    return f.direction == Direction::Decreasing ? -s : s;
}

double SyntheticTruth::numeric_logit(const std::vector<double>& raw_num) const {
    double z = bias;
    for (std::size_t j = 0; j < num_fields.size(); ++j) z += shape_value(j, raw_num[j]);
    return z;
}

SyntheticResult generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    Rng rng(Rng::derive(seed, 7));
    SyntheticResult out;
    SyntheticTruth& truth = out.truth;

    truth.num_fields = spec.num_fields;
    for (auto& f : truth.num_fields) {
        f.knots = {1.0, 2.0};
        f.segment_slopes.clear();
        for (int seg = 0; seg < 3; ++seg)
            f.segment_slopes.push_back(f.amplitude * rng.uniform(0.3, 1.0));
    }
    truth.cat_effects.clear();
    for (std::size_t i = 0; i < spec.cat_vocab_sizes.size(); ++i) {
        std::vector<double> eff(spec.cat_vocab_sizes[i]);
        for (double& e : eff) e = 0.3 * rng.normal();
        truth.cat_effects.push_back(std::move(eff));
    }

    const std::size_t M = spec.cat_vocab_sizes.size();
    const std::size_t N = spec.num_fields.size();
    std::vector<std::vector<std::size_t>> cat_vals(spec.n_samples,
                                                   std::vector<std::size_t>(M));
    std::vector<std::vector<double>> num_vals(spec.n_samples, std::vector<double>(N));
    std::vector<double> partial(spec.n_samples, 0.0);
    double shape_mean = 0.0;
    for (std::size_t s = 0; s < spec.n_samples; ++s) {
        double z = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            cat_vals[s][i] = rng.index(spec.cat_vocab_sizes[i]);
            z += truth.cat_effects[i][cat_vals[s][i]];
        }
        for (std::size_t j = 0; j < N; ++j) {
            const double x = std::exp(0.8 * rng.normal() + 0.5);
            num_vals[s][j] = x;
            z += truth.shape_value(j, x);
        }
        partial[s] = z;
        shape_mean += z;
    }
    shape_mean /= static_cast<double>(spec.n_samples);
    truth.bias = -shape_mean;

    out.data.columns.clear();
    for (std::size_t i = 0; i < M; ++i) out.data.columns.push_back("cat" + std::to_string(i));
    for (std::size_t j = 0; j < N; ++j) out.data.columns.push_back("num" + std::to_string(j));
    out.data.columns.push_back("click");

    for (std::size_t s = 0; s < spec.n_samples; ++s) {
        const double logit = partial[s] + truth.bias + spec.noise_sigma * rng.normal();
        const double p = sigmoid(logit);
        truth.mc_mean_prob += p;
        truth.mc_prob_var_sum += p * (1.0 - p);
        const double y = rng.uniform() < p ? 1.0 : 0.0;

        RawRecord rec;
        for (std::size_t i = 0; i < M; ++i)
            rec["cat" + std::to_string(i)] = "c" + std::to_string(cat_vals[s][i]);
        for (std::size_t j = 0; j < N; ++j)
            rec["num" + std::to_string(j)] = format_double(num_vals[s][j]);
        rec["click"] = y == 1.0 ? "1" : "0";
        out.data.records.push_back(std::move(rec));
    }
    truth.mc_mean_prob /= static_cast<double>(spec.n_samples);
    return out;
}

// ---- base64 ---------------------------------------------------------------

namespace {

const char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode(const std::vector<double>& xs) {
    // little-endian float64 payload
    std::vector<unsigned char> bytes(xs.size() * 8);
    std::memcpy(bytes.data(), xs.data(), bytes.size());
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < bytes.size(); i += 3) {
        unsigned v = bytes[i] << 16;
        if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
        if (i + 2 < bytes.size()) v |= bytes[i + 2];
        out += kB64[(v >> 18) & 63];
        out += kB64[(v >> 12) & 63];
        out += i + 1 < bytes.size() ? kB64[(v >> 6) & 63] : '=';
        out += i + 2 < bytes.size() ? kB64[v & 63] : '=';
    }
    return out;
}

std::vector<double> b64_decode(const std::string& text, std::size_t expect_count) {
    std::vector<unsigned char> bytes;
    bytes.reserve(text.size() / 4 * 3);
    int acc = 0, bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n') continue;
        const char* pos = std::strchr(kB64, c);
        if (!pos) throw CorruptFile("invalid base64 character in tensor payload");
        acc = (acc << 6) | static_cast<int>(pos - kB64);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            bytes.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
        }
    }
    if (bytes.size() != expect_count * 8)
        throw CorruptFile("tensor payload has wrong length");
    std::vector<double> xs(expect_count);
    std::memcpy(xs.data(), bytes.data(), bytes.size());
    return xs;
}

nlohmann::json tensor_map_to_json(const std::map<std::string, Tensor>& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, t] : m) j[name] = {{"shape", t.shape}, {"data", b64_encode(t.v)}};
    return j;
}

std::map<std::string, Tensor> tensor_map_from_json(const nlohmann::json& j) {
    std::map<std::string, Tensor> out;
    for (const auto& [name, entry] : j.items()) {
        Tensor t;
        t.shape = entry.at("shape").get<std::vector<std::size_t>>();
        t.v = b64_decode(entry.at("data").get<std::string>(), t.numel_from_shape());
        out[name] = std::move(t);
    }
    return out;
}

nlohmann::json features_json(const FittedFeatures& feats) {
    nlohmann::json j;
    j["label_column"] = feats.schema.label_column;
    j["fields"] = nlohmann::json::array();
    for (const auto& f : feats.schema.fields) {
        j["fields"].push_back({{"name", f.name},
                               {"kind", f.kind == FieldKind::Categorical ? "categorical"
                                                                         : "numerical"},
                               {"vocab_size", f.vocab_size},
                               {"n_buckets", f.n_buckets},
                               {"direction", to_string(f.direction)},
                               {"mu", f.mu},
                               {"sigma", f.sigma},
                               {"log_transform", f.log_transform}});
    }
    j["vocabs"] = feats.vocabs;
    j["discretizers"] = nlohmann::json::array();
    for (const auto& d : feats.discretizers)
        j["discretizers"].push_back({{"cuts", d.cuts}, {"centers", d.centers}});
    return j;
}

FittedFeatures features_from(const nlohmann::json& j) {
    FittedFeatures feats;
    feats.schema.label_column = j.at("label_column").get<std::string>();
    for (const auto& fj : j.at("fields")) {
        FieldSpec f;
        f.name = fj.at("name").get<std::string>();
        f.kind = fj.at("kind").get<std::string>() == "categorical" ? FieldKind::Categorical
                                                                   : FieldKind::Numerical;
        f.vocab_size = fj.at("vocab_size").get<std::size_t>();
        f.n_buckets = fj.at("n_buckets").get<std::size_t>();
        f.direction = direction_from_string(fj.at("direction").get<std::string>());
        f.mu = fj.at("mu").get<double>();
        f.sigma = fj.at("sigma").get<double>();
        f.log_transform = fj.at("log_transform").get<bool>();
        feats.schema.fields.push_back(f);
    }
    feats.vocabs = j.at("vocabs").get<std::vector<std::map<std::string, int>>>();
    for (const auto& dj : j.at("discretizers")) {
        Discretizer d;
        d.cuts = dj.at("cuts").get<std::vector<double>>();
        d.centers = dj.at("centers").get<std::vector<double>>();
        feats.discretizers.push_back(std::move(d));
    }
    return feats;
}

nlohmann::json model_spec_json(const ModelSpec& spec) {
    return {{"kind", to_string(spec.kind)},
            {"embed_dim", spec.embed_dim},
            {"hidden", spec.hidden},
            {"cross_depth", spec.cross_depth}};
}

ModelSpec model_spec_from(const nlohmann::json& j) {
    ModelSpec spec;
    spec.kind = backbone_from_string(j.at("kind").get<std::string>());
    spec.embed_dim = j.at("embed_dim").get<std::size_t>();
    spec.hidden = j.at("hidden").get<std::vector<std::size_t>>();
    spec.cross_depth = j.at("cross_depth").get<std::size_t>();
    return spec;
}

}  // namespace

std::string features_to_json(const FittedFeatures& feats) {
    return features_json(feats).dump(2);
}

FittedFeatures features_from_json(const std::string& text) {
    try {
        return features_from(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("features: ") + e.what());
    }
}

Model Checkpoint::to_model() const {
    Model model;
    model.spec = model_spec;
    for (const auto& f : features.schema.fields) {
        if (f.kind == FieldKind::Categorical)
            model.cat_vocab_sizes.push_back(f.vocab_size);
        else
            model.num_bucket_counts.push_back(f.n_buckets);
    }
    model.params = params;
    return model;
}

void save_checkpoint(const std::string& path, const Model& model, const FittedFeatures& feats,
                     std::uint64_t seed, const std::string& config_echo) {
    nlohmann::json j;
    j["format_version"] = kCheckpointVersion;
    j["features"] = features_json(feats);
    j["model_spec"] = model_spec_json(model.spec);
    j["params"] = tensor_map_to_json(model.params.params);
    j["adam_m"] = tensor_map_to_json(model.params.m);
    j["adam_v"] = tensor_map_to_json(model.params.v);
    j["t"] = model.params.t;
    j["seed"] = seed;
    j["config_echo"] = config_echo;
    std::ofstream out(path);
    if (!out) throw Error("cannot write checkpoint: " + path);
    out << j.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open checkpoint: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("checkpoint: ") + e.what());
    }
    try {
        const int version = j.at("format_version").get<int>();
        if (version != kCheckpointVersion)
            throw VersionMismatch("unsupported checkpoint version " + std::to_string(version));
        Checkpoint ckpt;
        ckpt.features = features_from(j.at("features"));
        ckpt.model_spec = model_spec_from(j.at("model_spec"));
        ckpt.params.params = tensor_map_from_json(j.at("params"));
        ckpt.params.m = tensor_map_from_json(j.at("adam_m"));
        ckpt.params.v = tensor_map_from_json(j.at("adam_v"));
        ckpt.params.t = j.at("t").get<std::uint64_t>();
        ckpt.seed = j.at("seed").get<std::uint64_t>();
        ckpt.config_echo = j.at("config_echo").get<std::string>();
        return ckpt;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("checkpoint: ") + e.what());
    }
}

FeatureSchema kuairand_pure_schema() {
    FeatureSchema s;
    auto cat = [&](const std::string& name) {
        FieldSpec f;
        f.name = name;
        f.kind = FieldKind::Categorical;
        s.fields.push_back(f);
    };
    auto num = [&](const std::string& name) {
        FieldSpec f;
        f.name = name;
        f.kind = FieldKind::Numerical;
        f.direction = Direction::Increasing;
        f.n_buckets = 10;
        s.fields.push_back(f);
    };
    cat("user_id");
    cat("video_id");
    cat("tab");
    num("show_cnt");
    num("play_cnt");
    num("like_cnt");
    num("share_cnt");
    num("comment_cnt");
    num("follow_cnt");
    num("complete_play_cnt");
    s.label_column = "is_click";
    return s;
}

}  // namespace monoctr
