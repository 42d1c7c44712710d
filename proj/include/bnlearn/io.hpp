#ifndef BNLEARN_IO_HPP
#define BNLEARN_IO_HPP

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "stats.hpp"

// Text formats.
//
// Database: comma separated. Header of name:arity tokens, then one case per
// line of 0-based integer values.
//
// Network:
//   bn 1
//   var <name> <arity>                 one per variable, in index order
//   parents <name> [<p1> ...]          one per variable, ascending index order
//   cpt <name> <j> <p_1> ... <p_r>     one per parent configuration

namespace bnlearn {

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t end = s.find(sep, start);
        out.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

inline std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(std::move(t));
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::optional<std::size_t> parse_index(std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace detail

inline void write_database(std::ostream& out, const Database& db) {
    const auto& vars = db.variables();
    for (std::size_t i = 0; i < vars.size(); ++i) {
        out << (i ? "," : "") << vars[i].name << ':' << vars[i].arity;
    }
    out << '\n';
    for (std::size_t c = 0; c < db.case_count(); ++c) {
        auto row = db.row(c);
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

inline Database read_database(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<Database> db;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = detail::trim(line);
        if (!db) {
            if (body.empty()) throw ParseError(line_no, "missing database header");
            std::vector<Variable> vars;
            for (auto field : detail::split(body, ',')) {
                field = detail::trim(field);
                auto colon = field.find(':');
                if (colon == std::string_view::npos) throw ParseError(line_no, "header field needs name:arity");
                auto arity = detail::parse_index(field.substr(colon + 1));
                if (!arity) throw ParseError(line_no, "bad arity in header field '" + std::string(field) + "'");
                vars.push_back({std::string(field.substr(0, colon)), *arity});
            }
            try {
                db.emplace(std::move(vars));
            } catch (const SchemaError& e) {
                throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
            }
            continue;
        }
        if (body.empty()) continue;
        auto fields = detail::split(body, ',');
        if (fields.size() != db->variable_count()) {
            throw ParseError(line_no, "expected " + std::to_string(db->variable_count()) + " values, got " +
                                          std::to_string(fields.size()));
        }
        Assignment a;
        a.reserve(fields.size());
        for (auto f : fields) {
            auto v = detail::parse_index(detail::trim(f));
            if (!v) throw ParseError(line_no, "bad value '" + std::string(f) + "'");
            a.push_back(*v);
        }
        try {
            db->add_case(a);
        } catch (const SchemaError& e) {
            throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!db) throw ParseError(line_no + 1, "empty database file");
    return std::move(*db);
}

inline void write_network(std::ostream& out, const BayesNet& net) {
    const auto& s = net.structure();
    out << "bn 1\n";
    for (const auto& v : s.variables()) out << "var " << v.name << ' ' << v.arity << '\n';
    for (VarIndex i = 0; i < s.size(); ++i) {
        out << "parents " << s.variable(i).name;
        for (VarIndex p : s.parents(i)) out << ' ' << s.variable(p).name;
        out << '\n';
    }
    for (VarIndex i = 0; i < s.size(); ++i) {
        const auto& cpt = net.cpt(i);
        for (std::size_t j = 0; j < cpt.rows(); ++j) {
            out << "cpt " << s.variable(i).name << ' ' << j;
            for (double p : cpt.row(j)) out << ' ' << detail::format_double(p);
            out << '\n';
        }
    }
}

inline BayesNet read_network(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<Variable> vars;
    std::map<std::string, VarIndex, std::less<>> index;
    std::vector<std::optional<ParentSet>> parents;
    std::vector<std::vector<std::optional<std::vector<double>>>> rows;
    bool rows_sized = false;
    std::vector<std::size_t> q;

    auto lookup = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw ParseError(line_no, "unknown variable '" + name + "'");
        return it->second;
    };
    auto size_rows = [&] {
        if (rows_sized) return;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (!parents[i]) throw ParseError(line_no, "cpt before all parents lines");
        }
        std::vector<std::size_t> arities;
        for (const auto& v : vars) arities.push_back(v.arity);
        for (std::size_t i = 0; i < vars.size(); ++i) {
            q.push_back(configuration_count(*parents[i], arities));
            rows.emplace_back(q.back());
        }
        rows_sized = true;
    };

    while (std::getline(in, line)) {
        ++line_no;
        auto tok = detail::tokens(line);
        if (tok.empty()) continue;
        if (!header) {
            if (tok.size() != 2 || tok[0] != "bn") throw ParseError(line_no, "expected 'bn 1' header");
            if (tok[1] != "1") throw ParseError(line_no, "unsupported network format version " + tok[1]);
            header = true;
            continue;
        }
        const std::string& directive = tok[0];
        if (directive == "var") {
            if (tok.size() != 3) throw ParseError(line_no, "var needs a name and an arity");
            if (!parents.empty() && std::any_of(parents.begin(), parents.end(), [](auto& p) { return p.has_value(); })) {
                throw ParseError(line_no, "var after parents lines");
            }
            auto arity = detail::parse_index(tok[2]);
            if (!arity) throw ParseError(line_no, "bad arity '" + tok[2] + "'");
            if (!index.emplace(tok[1], vars.size()).second) throw ParseError(line_no, "duplicate var '" + tok[1] + "'");
            vars.push_back({tok[1], *arity});
            parents.emplace_back();
        } else if (directive == "parents") {
            if (tok.size() < 2) throw ParseError(line_no, "parents needs a variable name");
            if (rows_sized) throw ParseError(line_no, "parents after cpt lines");
            VarIndex i = lookup(tok[1]);
            if (parents[i]) throw ParseError(line_no, "duplicate parents line for '" + tok[1] + "'");
            ParentSet ps;
            for (std::size_t t = 2; t < tok.size(); ++t) ps.push_back(lookup(tok[t]));
            if (!std::is_sorted(ps.begin(), ps.end())) {
                throw ParseError(line_no, "parents must be listed in ascending index order");
            }
            parents[i] = std::move(ps);
        } else if (directive == "cpt") {
            if (tok.size() < 3) throw ParseError(line_no, "cpt needs a name and a row index");
            size_rows();
            VarIndex i = lookup(tok[1]);
            auto j = detail::parse_index(tok[2]);
            if (!j || *j >= q[i]) throw ParseError(line_no, "bad configuration index '" + tok[2] + "'");
            if (tok.size() - 3 != vars[i].arity) {
                throw ParseError(line_no, "cpt row needs " + std::to_string(vars[i].arity) + " probabilities");
            }
            if (rows[i][*j]) throw ParseError(line_no, "duplicate cpt row");
            std::vector<double> row;
            for (std::size_t t = 3; t < tok.size(); ++t) {
                auto p = detail::parse_double(tok[t]);
                if (!p) throw ParseError(line_no, "bad probability '" + tok[t] + "'");
                row.push_back(*p);
            }
            rows[i][*j] = std::move(row);
        } else {
            throw ParseError(line_no, "unknown directive '" + directive + "'");
        }
    }
    if (!header) throw ParseError(line_no + 1, "missing 'bn 1' header");
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!parents[i]) throw SchemaError("missing parents line for '" + vars[i].name + "'");
    }
    size_rows();

    std::vector<ParentSet> ps;
    for (auto& p : parents) ps.push_back(std::move(*p));
    NetworkStructure structure(vars, std::move(ps));
    std::vector<Cpt> cpts;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        std::vector<double> probs;
        for (std::size_t j = 0; j < q[i]; ++j) {
            if (!rows[i][j]) {
                throw SchemaError("missing cpt row " + std::to_string(j) + " of '" + vars[i].name + "'");
            }
            probs.insert(probs.end(), rows[i][j]->begin(), rows[i][j]->end());
        }
        cpts.emplace_back(q[i], vars[i].arity, std::move(probs));
    }
    return BayesNet(std::move(structure), std::move(cpts));
}

inline void write_database(const std::string& path, const Database& db) {
    auto out = detail::open_out(path);
    write_database(out, db);
}

inline Database read_database(const std::string& path) {
    auto in = detail::open_in(path);
    return read_database(in);
}

inline void write_network(const std::string& path, const BayesNet& net) {
    auto out = detail::open_out(path);
    write_network(out, net);
}

inline BayesNet read_network(const std::string& path) {
    auto in = detail::open_in(path);
    return read_network(in);
}

}  // namespace bnlearn

#endif  // BNLEARN_IO_HPP
