#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "gptc/gpt.hpp"
#include "gptc/witness.hpp"

namespace gptc {

/*
 * Minimal deterministic JSON emitter: keys appear in insertion order and
 * floats print with 17 significant digits, so identical inputs (and seeds)
 * produce byte-identical documents.
 */
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(long v);
    JsonWriter& value(int v) { return value(static_cast<long>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& value(const Vec<double>& v);
    JsonWriter& value(const std::vector<Vec<double>>& v);

    std::string str() const { return out_.str(); }

private:
    void separator();
    std::ostringstream out_;
    std::vector<bool> needs_comma_;
    bool pending_key_ = false;
};

std::string format_float(double v);

/// Parsed model description; build<S>() instantiates it over either scalar.
struct ModelSpec {
    std::string type;  // classical | hypercube | crosspolytope | ball | custom
    int n = 0;
    // Custom models carry the cone and unit explicitly.
    std::vector<Vec<double>> generators;
    std::vector<Vec<double>> facets;
    Vec<double> unit;
    int dim = 0;

    template <class S>
    Gpt<S> build() const {
        if (type == "classical") return make_classical<S>(n);
        if (type == "hypercube") return make_hypercube<S>(n);
        if (type == "crosspolytope") return make_crosspolytope<S>(n);
        if (type == "ball") return make_ball<S>(n);
        if (type == "custom") {
            std::vector<Vec<S>> gens, fac;
            for (const auto& g : generators) gens.push_back(promote<S>(g));
            for (const auto& h : facets) fac.push_back(promote<S>(h));
            return make_custom<S>(PolyCone<S>::trusted(dim, std::move(gens), std::move(fac)),
                                  promote<S>(unit));
        }
        throw ParseError("model: unknown type '" + type + "'");
    }

    template <class S>
    static Vec<S> promote(const Vec<double>& v) {
        Vec<S> out;
        out.reserve(v.size());
        for (double x : v) out.push_back(scalar_traits<S>::from_double(x));
        return out;
    }
};

ModelSpec parse_model(const std::string& json_text);
ModelSpec parse_model_file(const std::string& path);

/// Measurement file {"k": [...], "effects": [[[...]]]}.
MeasurementFamily<double> parse_measurements(const std::string& json_text);
MeasurementFamily<double> parse_measurements_file(const std::string& path);

/// Exact scalars get the float data verbatim except for the trailing effect
/// of each measurement, which is rebuilt as unit minus the others so the
/// sum-to-unit invariant holds exactly (float files carry it only to an ulp).
template <class S>
MeasurementFamily<S> promote_family(const MeasurementFamily<double>& fam, const Vec<S>& unit) {
    MeasurementFamily<S> out;
    for (const auto& m : fam.measurements) {
        Measurement<S> pm;
        for (const auto& f : m.effects) pm.effects.push_back(ModelSpec::promote<S>(f));
        if constexpr (scalar_traits<S>::exact) {
            if (!pm.effects.empty()) {
                Vec<S> tail = unit;
                for (std::size_t j = 0; j + 1 < pm.effects.size(); ++j)
                    tail = sub(tail, pm.effects[j]);
                pm.effects.back() = std::move(tail);
            }
        }
        out.measurements.push_back(std::move(pm));
    }
    return out;
}

/// Cone file {"dim": n, "generators": [[...]], "facets": [[...]]}.
PolyCone<double> parse_cone(const std::string& json_text);
std::string cone_to_json(const PolyCone<double>& cone);

std::string measurements_to_json(const MeasurementFamily<double>& fam);

/// Witness file {"z0": [...], "z": [[...]], "strict": bool, "pi_norm": x}.
void write_witness(JsonWriter& out, const Gpt<double>& g, const Witness<double>& w);
std::string witness_to_json(const Gpt<double>& g, const Witness<double>& w);
Witness<double> parse_witness(const std::string& json_text);

template <class S>
Vec<double> demote(const Vec<S>& v) {
    Vec<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(scalar_traits<S>::to_double(x));
    return out;
}

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace gptc
