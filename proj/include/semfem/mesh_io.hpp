#pragma once

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "semfem/mesh.hpp"

namespace semfem {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

// Line-oriented text format:
//   <nv> <nt> <nbe>
//   nv lines "x y" (17 significant digits, round-trip exact)
//   nt lines "i j k" (0-based, CCW)
//   nbe lines "i j TAG" with TAG in {D, N}
// Refinement flags are not serialized; imports start Plain.
inline std::string export_mesh(const Mesh& m) {
    std::string out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d %d %d\n", m.n_vertices(), m.n_triangles(),
                  static_cast<int>(m.boundary_edges.size()));
    out += buf;
    for (const auto& p : m.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
        out += buf;
    }
    for (const auto& tri : m.triangles) {
        std::snprintf(buf, sizeof buf, "%d %d %d\n", tri[0], tri[1], tri[2]);
        out += buf;
    }
    for (const auto& be : m.boundary_edges) {
        std::snprintf(buf, sizeof buf, "%d %d %c\n", be.v0, be.v1,
                      be.tag == BoundaryTag::Dirichlet ? 'D' : 'N');
        out += buf;
    }
    return out;
}

namespace detail {

struct LineReader {
    std::vector<std::string> lines;
    std::size_t pos = 0;

    explicit LineReader(const std::string& text) {
        std::string cur;
        for (char ch : text) {
            if (ch == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur += ch;
            }
        }
        if (!cur.empty()) lines.push_back(cur);
    }

    int lineno() const { return static_cast<int>(pos); }  // 1-based after next()

    std::string next(const char* what) {
        if (pos >= lines.size())
            throw ParseError(static_cast<int>(lines.size()) + 1,
                             std::string("unexpected end of input, expected ") + what);
        return lines[pos++];
    }

    void finish() const {
        for (std::size_t k = pos; k < lines.size(); ++k)
            if (lines[k].find_first_not_of(" \t") != std::string::npos)
                throw ParseError(static_cast<int>(k) + 1, "trailing content after mesh data");
    }
};

inline void require_line_end(std::istringstream& ss, int lineno, const char* what) {
    std::string rest;
    if (ss >> rest)
        throw ParseError(lineno, std::string("trailing characters on ") + what + " line");
}

}  // namespace detail

inline Mesh import_mesh(const std::string& text) {
    detail::LineReader in(text);

    std::istringstream header(in.next("header"));
    int nv = 0, nt = 0, nbe = 0;
    if (!(header >> nv >> nt >> nbe) || nv < 0 || nt < 0 || nbe < 0)
        throw ParseError(in.lineno(), "malformed header, expected \"<nv> <nt> <nbe>\"");
    detail::require_line_end(header, in.lineno(), "header");

    Mesh m;
    m.vertices.reserve(nv);
    for (int v = 0; v < nv; ++v) {
        std::istringstream ss(in.next("vertex line"));
        Point2 p;
        if (!(ss >> p.x >> p.y))
            throw ParseError(in.lineno(), "malformed vertex line, expected \"x y\"");
        detail::require_line_end(ss, in.lineno(), "vertex");
        m.vertices.push_back(p);
    }
    m.triangles.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        std::istringstream ss(in.next("triangle line"));
        int i = 0, j = 0, k = 0;
        if (!(ss >> i >> j >> k))
            throw ParseError(in.lineno(), "malformed triangle line, expected \"i j k\"");
        detail::require_line_end(ss, in.lineno(), "triangle");
        if (i < 0 || i >= nv || j < 0 || j >= nv || k < 0 || k >= nv)
            throw ParseError(in.lineno(), "triangle vertex index out of range");
        m.triangles.push_back({i, j, k});
    }
    m.boundary_edges.reserve(nbe);
    for (int e = 0; e < nbe; ++e) {
        std::istringstream ss(in.next("boundary edge line"));
        int i = 0, j = 0;
        std::string tag;
        if (!(ss >> i >> j >> tag))
            throw ParseError(in.lineno(), "malformed boundary edge line, expected \"i j TAG\"");
        detail::require_line_end(ss, in.lineno(), "boundary edge");
        if (i < 0 || i >= nv || j < 0 || j >= nv)
            throw ParseError(in.lineno(), "boundary edge vertex index out of range");
        if (tag != "D" && tag != "N")
            throw ParseError(in.lineno(), "boundary tag must be D or N, got \"" + tag + "\"");
        m.boundary_edges.push_back(
            {i, j, tag == "D" ? BoundaryTag::Dirichlet : BoundaryTag::Neumann});
    }
    in.finish();
    m.refinement_flags.assign(m.triangles.size(), TriFlag::Plain);
    validate_mesh(m);
    return m;
}

}  // namespace semfem
