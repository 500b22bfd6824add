#include "tdhinf/system_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tdhinf {

namespace {

using nlohmann::json;

const json& member(const json& doc, const std::string& name) {
    auto it = doc.find(name);
    if (it == doc.end()) throw ParseError("missing member '" + name + "'");
    return *it;
}

Eigen::Index dimension(const json& doc, const std::string& name) {
    const json& v = member(doc, name);
    if (!v.is_number_integer() || v.get<long long>() <= 0)
        throw ParseError("member '" + name + "' must be a positive integer");
    return static_cast<Eigen::Index>(v.get<long long>());
}

Matrix matrix(const json& v, const std::string& name, Eigen::Index rows, Eigen::Index cols) {
    if (!v.is_array()) throw ParseError("member '" + name + "' must be an array");
    if (static_cast<Eigen::Index>(v.size()) != rows * cols)
        throw ParseError("member '" + name + "' must hold " + std::to_string(rows * cols) + " numbers (" +
                         std::to_string(rows) + "x" + std::to_string(cols) + " row-major), got " +
                         std::to_string(v.size()));
    Matrix out(rows, cols);
    for (Eigen::Index i = 0; i < rows * cols; ++i) {
        const json& e = v[static_cast<std::size_t>(i)];
        if (!e.is_number()) throw ParseError("member '" + name + "'[" + std::to_string(i) + "] is not a number");
        out(i / cols, i % cols) = e.get<double>();
    }
    return out;
}

json flat(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    return out;
}

}  // namespace

DelaySystem parse_system(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("not a valid system document: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("system document must be an object");

    const Eigen::Index n = dimension(doc, "n");
    const Eigen::Index nu = dimension(doc, "nu");
    const Eigen::Index ny = dimension(doc, "ny");

    Matrix A0 = matrix(member(doc, "A0"), "A0", n, n);
    std::vector<DelayTerm> delays;
    if (auto it = doc.find("delays"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("member 'delays' must be an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& term = (*it)[i];
            const std::string where = "delays[" + std::to_string(i) + "]";
            if (!term.is_object()) throw ParseError("member '" + where + "' must be an object");
            auto tau = term.find("tau");
            if (tau == term.end()) throw ParseError("missing member '" + where + ".tau'");
            if (!tau->is_number()) throw ParseError("member '" + where + ".tau' is not a number");
            auto a = term.find("A");
            if (a == term.end()) throw ParseError("missing member '" + where + ".A'");
            delays.push_back({tau->get<double>(), matrix(*a, where + ".A", n, n)});
        }
    }
    Matrix B = matrix(member(doc, "B"), "B", n, nu);
    Matrix C = matrix(member(doc, "C"), "C", ny, n);
    Matrix D = matrix(member(doc, "D"), "D", ny, nu);
    return DelaySystem(std::move(A0), std::move(delays), std::move(B), std::move(C), std::move(D));
}

DelaySystem load_system(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open system file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str());
}

std::string write_system(const DelaySystem& sys) {
    json doc;
    doc["n"] = sys.n();
    doc["nu"] = sys.nu();
    doc["ny"] = sys.ny();
    doc["A0"] = flat(sys.A0());
    doc["delays"] = json::array();
    for (const auto& d : sys.delays()) doc["delays"].push_back({{"tau", d.tau}, {"A", flat(d.A)}});
    doc["B"] = flat(sys.B());
    doc["C"] = flat(sys.C());
    doc["D"] = flat(sys.D());
    return doc.dump(2) + "\n";
}

}  // namespace tdhinf
