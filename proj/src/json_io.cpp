#include "gptc/json_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace gptc {

using nlohmann::json;

JsonWriter& JsonWriter::begin_object() {
    separator();
    out_ << "{";
    needs_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ << "}";
    needs_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separator();
    out_ << "[";
    needs_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ << "]";
    needs_comma_.pop_back();
    return *this;
}

void JsonWriter::separator() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!needs_comma_.empty()) {
        if (needs_comma_.back()) out_ << ",";
        needs_comma_.back() = true;
    }
}

JsonWriter& JsonWriter::key(const std::string& k) {
    separator();
    out_ << '"' << k << "\":";
    pending_key_ = true;
    return *this;
}

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

JsonWriter& JsonWriter::value(double v) {
    separator();
    out_ << format_float(v);
    return *this;
}

JsonWriter& JsonWriter::value(long v) {
    separator();
    out_ << v;
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separator();
    out_ << (v ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    separator();
    out_ << '"';
    for (char c : v) {
        if (c == '"' || c == '\\') out_ << '\\';
        out_ << c;
    }
    out_ << '"';
    return *this;
}

JsonWriter& JsonWriter::value(const Vec<double>& v) {
    begin_array();
    for (double x : v) value(x);
    return end_array();
}

JsonWriter& JsonWriter::value(const std::vector<Vec<double>>& v) {
    begin_array();
    for (const auto& row : v) value(row);
    return end_array();
}

namespace {

json parse_or_throw(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(std::string(what) + ": malformed JSON");
    return j;
}

Vec<double> as_vec(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array");
    Vec<double> v;
    for (const auto& x : j) {
        if (!x.is_number()) throw ParseError(std::string(what) + ": expected numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

std::vector<Vec<double>> as_mat(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of arrays");
    std::vector<Vec<double>> m;
    for (const auto& row : j) m.push_back(as_vec(row, what));
    return m;
}

}  // namespace

ModelSpec parse_model(const std::string& text) {
    json j = parse_or_throw(text, "model");
    ModelSpec spec;
    if (!j.contains("model") || !j["model"].is_string())
        throw ParseError("model: missing \"model\" tag");
    spec.type = j["model"].get<std::string>();
    if (spec.type == "custom") {
        if (!j.contains("cone")) throw ParseError("model: custom model needs a \"cone\"");
        const auto& c = j["cone"];
        if (!c.contains("dim") || !c.contains("generators"))
            throw ParseError("model: cone needs \"dim\" and \"generators\"");
        spec.dim = c["dim"].get<int>();
        spec.generators = as_mat(c["generators"], "cone generators");
        if (c.contains("facets")) spec.facets = as_mat(c["facets"], "cone facets");
        if (!j.contains("unit")) throw ParseError("model: custom model needs a \"unit\"");
        spec.unit = as_vec(j["unit"], "unit");
    } else {
        if (!j.contains("n") || !j["n"].is_number_integer())
            throw ParseError("model: missing integer \"n\"");
        spec.n = j["n"].get<int>();
    }
    return spec;
}

MeasurementFamily<double> parse_measurements(const std::string& text) {
    json j = parse_or_throw(text, "measurements");
    if (!j.contains("k") || !j.contains("effects"))
        throw ParseError("measurements: need \"k\" and \"effects\"");
    std::vector<int> k;
    for (const auto& x : j["k"]) k.push_back(x.get<int>());
    MeasurementFamily<double> fam;
    const auto& eff = j["effects"];
    if (!eff.is_array() || eff.size() != k.size())
        throw ParseError("measurements: effects shape does not match k");
    for (std::size_t i = 0; i < k.size(); ++i) {
        Measurement<double> m;
        if (!eff[i].is_array() || static_cast<int>(eff[i].size()) != k[i])
            throw ParseError("measurements: effect count does not match k");
        for (const auto& f : eff[i]) m.effects.push_back(as_vec(f, "effect"));
        fam.measurements.push_back(std::move(m));
    }
    return fam;
}

PolyCone<double> parse_cone(const std::string& text) {
    json j = parse_or_throw(text, "cone");
    if (!j.contains("dim") || !j.contains("generators"))
        throw ParseError("cone: need \"dim\" and \"generators\"");
    PolyCone<double> c;
    c.dim = j["dim"].get<int>();
    c.generators = as_mat(j["generators"], "cone generators");
    if (j.contains("facets")) c.facets = as_mat(j["facets"], "cone facets");
    return c;
}

std::string cone_to_json(const PolyCone<double>& cone) {
    JsonWriter w;
    w.begin_object();
    w.key("dim").value(cone.dim);
    w.key("generators").value(cone.generators);
    w.key("facets").value(cone.facets);
    w.end_object();
    return w.str();
}

std::string measurements_to_json(const MeasurementFamily<double>& fam) {
    JsonWriter w;
    w.begin_object();
    w.key("k").begin_array();
    for (const auto& m : fam.measurements) w.value(m.outcomes());
    w.end_array();
    w.key("effects").begin_array();
    for (const auto& m : fam.measurements) w.value(m.effects);
    w.end_array();
    w.end_object();
    return w.str();
}

void write_witness(JsonWriter& out, const Gpt<double>& g, const Witness<double>& w) {
    double pi = 0;
    for (const auto& zi : w.z) pi += base_norm(g, zi);
    out.begin_object();
    out.key("z0");
    if (w.z0)
        out.value(*w.z0);
    else
        out.begin_array().end_array();
    out.key("z").value(w.z);
    out.key("strict").value(pi > 1.0 + 1e-9);
    out.key("pi_norm").value(pi);
    out.end_object();
}

std::string witness_to_json(const Gpt<double>& g, const Witness<double>& w) {
    JsonWriter out;
    write_witness(out, g, w);
    return out.str();
}

Witness<double> parse_witness(const std::string& text) {
    json j = parse_or_throw(text, "witness");
    if (!j.contains("z")) throw ParseError("witness: missing \"z\"");
    Witness<double> w;
    w.z = as_mat(j["z"], "witness blocks");
    if (j.contains("z0")) {
        auto z0 = as_vec(j["z0"], "witness state");
        if (!z0.empty()) w.z0 = std::move(z0);
    }
    return w;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

ModelSpec parse_model_file(const std::string& path) { return parse_model(read_file(path)); }

MeasurementFamily<double> parse_measurements_file(const std::string& path) {
    return parse_measurements(read_file(path));
}

}  // namespace gptc
