#include <sandglass/objio.hpp>

#include <sandglass/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sandglass {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string obj_text(const Mesh &mesh, const std::string &header) {
    std::ostringstream out;
    if (!header.empty()) {
        std::istringstream lines(header);
        std::string line;
        while (std::getline(lines, line))
            out << "# " << line << "\n";
    }
    for (const auto &v : mesh.V)
        out << "v " << num(v.x()) << " " << num(v.y()) << " " << num(v.z()) << "\n";
    for (const auto &f : mesh.F)
        out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
    for (const auto &e : mesh.E)
        out << "# edge class " << edge_class_name(e.cls) << " " << e.a + 1 << " " << e.b + 1
            << "\n";
    return out.str();
}

void write_obj(const std::string &path, const Mesh &mesh, const std::string &header) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::Usage, "cannot open for writing: " + path);
    out << obj_text(mesh, header);
}

Mesh parse_obj(const std::string &text) {
    Mesh m;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag))
            continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z))
                throw Error(ErrorCode::Usage, "malformed vertex record: " + line);
            m.V.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::array<int, 3> f{};
            for (int k = 0; k < 3; ++k) {
                std::string tok;
                if (!(ls >> tok))
                    throw Error(ErrorCode::Usage, "malformed face record: " + line);
                // accept a/b/c style references, keep the vertex index
                f[k] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
                if (f[k] < 0)
                    throw Error(ErrorCode::Usage, "face index out of range: " + line);
            }
            m.F.push_back(f);
        }
        // everything else (comments, normals, ...) is skipped
    }
    for (const auto &f : m.F)
        for (int k = 0; k < 3; ++k)
            if (f[k] >= int(m.V.size()))
                throw Error(ErrorCode::Usage, "face references missing vertex");
    return m;
}

Mesh read_obj(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::Usage, "cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_obj(buf.str());
}

namespace {

Eigen::Vector3d arc_point(const std::vector<Eigen::Vector3d> &path,
                          const std::vector<double> &cum, double s) {
    s = std::clamp(s, 0.0, cum.back());
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t hi = std::min<std::size_t>(it - cum.begin(), path.size() - 1);
    if (hi == 0)
        return path.front();
    const std::size_t lo = hi - 1;
    const double seg = cum[hi] - cum[lo];
    const double t = seg > 0 ? (s - cum[lo]) / seg : 0.0;
    return path[lo] + t * (path[hi] - path[lo]);
}

bool winding_flipped(double H, double h) { return (H < 0) || (H == 0 && h < 0); }

} // namespace

std::vector<Mesh> animate(const SnapResult &snap, int frames) {
    if (frames < 2)
        throw Error(ErrorCode::Domain, "animation needs at least 2 frames");
    const auto &path = snap.saddle.path;
    if (path.size() < 2)
        throw Error(ErrorCode::Domain, "snap result carries no transition path");
    const int node = snap.saddle.saddle_node;
    if (node <= 0 || node >= int(path.size()) - 1)
        throw Error(ErrorCode::Domain, "snap result carries no interior saddle node");

    std::vector<double> cum(path.size(), 0.0);
    for (std::size_t i = 1; i < path.size(); ++i)
        cum[i] = cum[i - 1] + (path[i] - path[i - 1]).norm();
    const double total = cum.back();
    const double sstar = cum[node];
    if (!(total > 0))
        throw Error(ErrorCode::Domain, "degenerate transition path");

    const bool base_flip = winding_flipped(path.front().x(), path.front().y());

    std::vector<Mesh> out;
    out.reserve(frames);
    for (int j = 0; j < frames; ++j) {
        const double xi = double(j) / double(frames - 1);
        const double s = xi <= 0.5 ? 2.0 * xi * sstar : sstar + (2.0 * xi - 1.0) * (total - sstar);
        const Eigen::Vector3d p = arc_point(path, cum, s);
        Realization real;
        real.spec = snap.spec;
        real.H = p.x();
        real.h = p.y();
        real.r = p.z();
        Mesh m = build_mesh(real);
        if (winding_flipped(real.H, real.h) != base_flip)
            for (auto &f : m.F)
                std::swap(f[1], f[2]);
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace sandglass
