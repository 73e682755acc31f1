#include "fln/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fln/errors.hpp"
#include "fln/io.hpp"

namespace fln {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure on file: " + path);
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open file for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("write failure on file: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot rename " + tmp + " to " + path);
}

std::string double_to_hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double hex_to_double(const std::string& s) {
    if (s.empty()) throw ParseError("empty number string");
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size())
        throw ParseError("malformed number string: \"" + s + "\"");
    return v;
}

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- writing

void write_hex_array(std::ostringstream& o, const double* v, std::size_t n,
                     const char* indent) {
    o << "[";
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 8 == 0) o << "\n" << indent << "  ";
        else o << " ";
        o << '"' << double_to_hex(v[i]) << '"';
        if (i + 1 < n) o << ",";
    }
    if (n) o << "\n" << indent;
    o << "]";
}

void write_index_array(std::ostringstream& o, const std::vector<std::size_t>& v) {
    o << "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) o << ", ";
        o << v[i];
    }
    o << "]";
}

void write_matrix(std::ostringstream& o, const Matrix& m, const char* indent) {
    o << "{\"rows\": " << m.rows << ", \"cols\": " << m.cols << ", \"data\": ";
    write_hex_array(o, m.data.data(), m.data.size(), indent);
    o << "}";
}

// ---------------------------------------------------------------- reading

const json& require_key(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.is_object())
        throw ValidationError("checkpoint: " + ctx + " is not an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError("checkpoint: missing key \"" + std::string(key) + "\" in " + ctx);
    return *it;
}

std::size_t require_uint(const json& v, const std::string& ctx) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ValidationError("checkpoint: " + ctx + " must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string require_string(const json& v, const std::string& ctx) {
    if (!v.is_string())
        throw ValidationError("checkpoint: " + ctx + " must be a string");
    return v.get<std::string>();
}

std::vector<double> read_hex_array(const json& v, const std::string& ctx) {
    if (!v.is_array())
        throw ValidationError("checkpoint: " + ctx + " must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(hex_to_double(require_string(e, ctx + " entry")));
    return out;
}

Matrix read_matrix(const json& v, const std::string& ctx) {
    Matrix m;
    m.rows = require_uint(require_key(v, "rows", ctx), ctx + ".rows");
    m.cols = require_uint(require_key(v, "cols", ctx), ctx + ".cols");
    m.data = read_hex_array(require_key(v, "data", ctx), ctx + ".data");
    if (m.data.size() != m.rows * m.cols)
        throw ValidationError("checkpoint: " + ctx + " declares " + m.shape_str() +
                              " but carries " + std::to_string(m.data.size()) + " values");
    return m;
}

std::vector<std::size_t> read_index_array(const json& v, const std::string& ctx) {
    if (!v.is_array())
        throw ValidationError("checkpoint: " + ctx + " must be an array");
    std::vector<std::size_t> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(require_uint(e, ctx + " entry"));
    return out;
}

} // namespace

void save(const FeatureLevelNet& net, const std::string& path,
          const std::string& config_json) {
    validate_net(net);
    for (std::size_t k = 1; k < net.gates.size(); ++k) {
        const GateConstants& a = net.gates[0].c;
        const GateConstants& b = net.gates[k].c;
        if (a.beta != b.beta || a.gamma != b.gamma || a.zeta != b.zeta) {
            throw ValidationError("save: gate " + std::to_string(k + 1) +
                                  " has different gate constants than gate 1; "
                                  "the checkpoint format stores one shared set");
        }
    }
    std::ostringstream o;
    o << "{\n";
    o << "  \"version\": 1,\n";
    o << "  \"task\": \"" << to_string(net.task) << "\",\n";
    o << "  \"arch\": [";
    for (std::size_t k = 0; k < net.depth(); ++k) {
        if (k) o << ", ";
        o << net.layers[k].weights.rows;
    }
    o << "],\n";
    o << "  \"gate_constants\": {\"beta\": \"" << double_to_hex(net.gates.empty() ? GateConstants{}.beta : net.gates[0].c.beta)
      << "\", \"gamma\": \"" << double_to_hex(net.gates.empty() ? GateConstants{}.gamma : net.gates[0].c.gamma)
      << "\", \"zeta\": \"" << double_to_hex(net.gates.empty() ? GateConstants{}.zeta : net.gates[0].c.zeta) << "\"},\n";
    if (net.compact) o << "  \"pruned\": true,\n";
    o << "  \"layers\": [";
    for (std::size_t k = 0; k < net.depth(); ++k) {
        if (k) o << ",";
        o << "\n    {\"weights\": ";
        write_matrix(o, net.layers[k].weights, "    ");
        o << ",\n     \"bias\": ";
        write_hex_array(o, net.layers[k].bias.data.data(), net.layers[k].bias.data.size(), "     ");
        if (!net.layers[k].input_index.empty()) {
            o << ",\n     \"input_index\": ";
            write_index_array(o, net.layers[k].input_index);
        }
        o << "}";
    }
    o << (net.depth() ? "\n  ],\n" : "],\n");
    o << "  \"gates\": [";
    for (std::size_t k = 0; k < net.gates.size(); ++k) {
        if (k) o << ",";
        o << "\n    {\"log_alpha\": ";
        write_hex_array(o, net.gates[k].log_alpha.data(), net.gates[k].log_alpha.size(), "    ");
        o << "}";
    }
    o << (net.gates.empty() ? "],\n" : "\n  ],\n");
    o << "  \"head\": {\n    \"weights\": ";
    write_matrix(o, net.head.weights, "    ");
    o << ",\n    \"bias\": ";
    write_hex_array(o, net.head.bias.data.data(), net.head.bias.data.size(), "    ");
    o << ",\n    \"link\": \"" << to_string(net.head.link) << "\",\n    \"group_offsets\": ";
    write_index_array(o, net.head.group_offsets);
    o << "\n  }";
    if (!config_json.empty()) o << ",\n  \"config\": " << config_json;
    o << "\n}\n";
    write_file_atomic(path, o.str());
}

FeatureLevelNet load(const std::string& path, std::string* config_json_out) {
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("checkpoint " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ValidationError("checkpoint: top level must be an object");

    const std::size_t version = require_uint(require_key(j, "version", "checkpoint"), "version");
    if (version != 1)
        throw ValidationError("unsupported checkpoint version " + std::to_string(version));

    FeatureLevelNet net;
    try {
        net.task = task_from_string(require_string(require_key(j, "task", "checkpoint"), "task"));
    } catch (const ArgumentError& e) {
        throw ValidationError(std::string("checkpoint: ") + e.what());
    }

    GateConstants gc;
    {
        const json& g = require_key(j, "gate_constants", "checkpoint");
        gc.beta = hex_to_double(require_string(require_key(g, "beta", "gate_constants"), "beta"));
        gc.gamma = hex_to_double(require_string(require_key(g, "gamma", "gate_constants"), "gamma"));
        gc.zeta = hex_to_double(require_string(require_key(g, "zeta", "gate_constants"), "zeta"));
    }

    const json& layers = require_key(j, "layers", "checkpoint");
    if (!layers.is_array()) throw ValidationError("checkpoint: \"layers\" must be an array");
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const std::string ctx = "layer " + std::to_string(k + 1);
        HiddenLayer layer;
        layer.weights = read_matrix(require_key(layers[k], "weights", ctx), ctx + ".weights");
        auto bias = read_hex_array(require_key(layers[k], "bias", ctx), ctx + ".bias");
        layer.bias = Matrix(1, bias.size());
        layer.bias.data = std::move(bias);
        if (layers[k].contains("input_index"))
            layer.input_index = read_index_array(layers[k]["input_index"], ctx + ".input_index");
        net.layers.push_back(std::move(layer));
    }

    const json& gates = require_key(j, "gates", "checkpoint");
    if (!gates.is_array()) throw ValidationError("checkpoint: \"gates\" must be an array");
    for (std::size_t k = 0; k < gates.size(); ++k) {
        const std::string ctx = "gate " + std::to_string(k + 1);
        HardConcreteGate gate;
        gate.c = gc;
        gate.log_alpha = read_hex_array(require_key(gates[k], "log_alpha", ctx), ctx + ".log_alpha");
        net.gates.push_back(std::move(gate));
    }

    {
        const json& h = require_key(j, "head", "checkpoint");
        net.head.weights = read_matrix(require_key(h, "weights", "head"), "head.weights");
        auto bias = read_hex_array(require_key(h, "bias", "head"), "head.bias");
        net.head.bias = Matrix(1, bias.size());
        net.head.bias.data = std::move(bias);
        try {
            net.head.link = link_from_string(require_string(require_key(h, "link", "head"), "head.link"));
        } catch (const ArgumentError& e) {
            throw ValidationError(std::string("checkpoint: ") + e.what());
        }
        net.head.group_offsets = read_index_array(require_key(h, "group_offsets", "head"),
                                                  "head.group_offsets");
    }

    net.compact = j.contains("pruned") && j["pruned"].is_boolean() && j["pruned"].get<bool>();

    // The input dimension is implied by the structure: a dense first layer
    // consumes every input feature; a compact one consumes its index list
    // while the complement fills head group 1.
    if (net.layers.empty()) {
        if (net.head.group_offsets.size() != 2)
            throw ValidationError("checkpoint: a network without layers must have exactly one head group");
        net.input_dim = net.head.group_offsets[1];
    } else if (net.layers[0].input_index.empty()) {
        net.input_dim = net.layers[0].weights.cols;
    } else {
        if (net.head.group_offsets.size() < 2)
            throw ValidationError("checkpoint: head group_offsets too short");
        net.input_dim = (net.head.group_offsets[1] - net.head.group_offsets[0]) +
                        net.layers[0].input_index.size();
    }

    // Cross-check the declared architecture against the actual weights.
    const json& arch = require_key(j, "arch", "checkpoint");
    if (!arch.is_array() || arch.size() != net.depth())
        throw ValidationError("checkpoint: \"arch\" must list one width per layer");
    for (std::size_t k = 0; k < net.depth(); ++k)
        if (require_uint(arch[k], "arch entry") != net.layers[k].weights.rows)
            throw ValidationError("checkpoint: arch[" + std::to_string(k) + "] = " +
                                  std::to_string(require_uint(arch[k], "arch entry")) +
                                  " does not match layer " + std::to_string(k + 1) + " width " +
                                  std::to_string(net.layers[k].weights.rows));

    validate_net(net);

    if (config_json_out) {
        *config_json_out = "";
        if (j.contains("config") && j["config"].is_object())
            *config_json_out = j["config"].dump(2);
    }
    return net;
}

} // namespace fln
