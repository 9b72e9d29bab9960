#include "artic/ply_io.hpp"

#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "artic/errors.hpp"
#include "artic/io_util.hpp"

namespace artic {

namespace {

std::vector<std::string> expected_properties(int sh_degree) {
    std::vector<std::string> props = {"x", "y", "z", "nx", "ny", "nz",
                                      "f_dc_0", "f_dc_1", "f_dc_2"};
    const int rest = 3 * ((sh_degree + 1) * (sh_degree + 1) - 1);
    for (int i = 0; i < rest; ++i) {
        props.push_back("f_rest_" + std::to_string(i));
    }
    props.push_back("opacity");
    for (int i = 0; i < 3; ++i) {
        props.push_back("scale_" + std::to_string(i));
    }
    for (int i = 0; i < 4; ++i) {
        props.push_back("rot_" + std::to_string(i));
    }
    return props;
}

int degree_from_rest_count(std::size_t rest_count) {
    for (int l = 0; l <= 3; ++l) {
        if (rest_count == static_cast<std::size_t>(3 * ((l + 1) * (l + 1) - 1))) {
            return l;
        }
    }
    throw FormatError("f_rest property count " + std::to_string(rest_count) +
                      " does not correspond to an SH degree in 0..3");
}

struct Header {
    std::size_t vertex_count = 0;
    std::vector<std::string> properties;
    std::size_t payload_offset = 0;
};

Header parse_header(const std::string& bytes, const std::string& path) {
    Header h;
    std::size_t pos = 0;
    auto next_line = [&]() -> std::string {
        const std::size_t eol = bytes.find('\n', pos);
        if (eol == std::string::npos) {
            throw FormatError(path + ": unterminated PLY header");
        }
        std::string line = bytes.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        pos = eol + 1;
        return line;
    };

    if (next_line() != "ply") {
        throw FormatError(path + ": missing 'ply' magic");
    }
    bool in_vertex_element = false;
    bool format_seen = false;
    for (;;) {
        const std::string line = next_line();
        if (line == "end_header") {
            break;
        }
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "comment" || tok.empty()) {
            continue;
        }
        if (tok == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt != "binary_little_endian") {
                throw FormatError(path + ": unsupported PLY format '" + fmt + "'");
            }
            format_seen = true;
        } else if (tok == "element") {
            std::string name;
            std::size_t count = 0;
            ls >> name >> count;
            if (name != "vertex") {
                throw FormatError(path + ": unexpected element '" + name + "'");
            }
            h.vertex_count = count;
            in_vertex_element = true;
        } else if (tok == "property") {
            if (!in_vertex_element) {
                throw FormatError(path + ": property outside vertex element");
            }
            std::string type, name;
            ls >> type >> name;
            if (type != "float") {
                throw FormatError(path + ": property '" + name +
                                  "' has unsupported type '" + type + "'");
            }
            h.properties.push_back(name);
        } else {
            throw FormatError(path + ": unexpected header line '" + line + "'");
        }
    }
    if (!format_seen) {
        throw FormatError(path + ": missing format line");
    }
    h.payload_offset = pos;
    return h;
}

void check_property_order(const std::vector<std::string>& got,
                          const std::vector<std::string>& want,
                          const std::string& path) {
    for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i) {
        if (got[i] != want[i]) {
            throw FormatError(path + ": expected property '" + want[i] +
                              "' at position " + std::to_string(i) + ", found '" +
                              got[i] + "'");
        }
    }
    if (got.size() < want.size()) {
        throw FormatError(path + ": missing property '" + want[got.size()] + "'");
    }
    if (got.size() > want.size()) {
        throw FormatError(path + ": unexpected extra property '" +
                          got[want.size()] + "'");
    }
}

}  // namespace

GaussianSet load_splat(const std::filesystem::path& path) {
    const std::string bytes = read_file_bytes(path);
    const Header h = parse_header(bytes, path.string());

    // Locate the f_rest block to infer the degree, then demand the exact
    // canonical property order for that degree.
    std::size_t rest_count = 0;
    for (const auto& p : h.properties) {
        if (p.rfind("f_rest_", 0) == 0) {
            ++rest_count;
        }
    }
    const int degree = degree_from_rest_count(rest_count);
    check_property_order(h.properties, expected_properties(degree), path.string());

    const std::size_t floats_per_vertex = h.properties.size();
    const std::size_t payload_bytes = bytes.size() - h.payload_offset;
    const std::size_t need = h.vertex_count * floats_per_vertex * sizeof(float);
    if (payload_bytes < need) {
        throw FormatError(path.string() + ": truncated payload (" +
                          std::to_string(payload_bytes) + " bytes, expected " +
                          std::to_string(need) + ")");
    }

    GaussianSet set;
    set.sh_degree = degree;
    const std::size_t n = h.vertex_count;
    set.means.resize(n);
    set.rotations.resize(n);
    set.log_scales.resize(n);
    set.opacities.resize(n);
    const int per_channel = set.coeffs_per_channel();
    const int rest_per_channel = per_channel - 1;
    set.sh_coeffs.resize(n * static_cast<std::size_t>(set.sh_width()));

    const char* cursor = bytes.data() + h.payload_offset;
    std::vector<float> row(floats_per_vertex);
    for (std::size_t i = 0; i < n; ++i) {
        std::memcpy(row.data(), cursor, floats_per_vertex * sizeof(float));
        cursor += floats_per_vertex * sizeof(float);

        set.means[i] = {row[0], row[1], row[2]};
        // row[3..5] are normals, ignored.
        float* sh = set.sh_coeffs.data() + i * set.sh_width();
        for (int c = 0; c < 3; ++c) {
            sh[c * per_channel] = row[6 + c];
            for (int k = 0; k < rest_per_channel; ++k) {
                sh[c * per_channel + 1 + k] = row[9 + c * rest_per_channel + k];
            }
        }
        const std::size_t base = 9 + 3 * static_cast<std::size_t>(rest_per_channel);
        set.opacities[i] = row[base];
        set.log_scales[i] = {row[base + 1], row[base + 2], row[base + 3]};
        set.rotations[i] = {row[base + 4], row[base + 5], row[base + 6],
                            row[base + 7]};
    }
    set.canonicalize_rotations();
    set.validate();
    return set;
}

void save_splat(const GaussianSet& set, const std::filesystem::path& path) {
    set.validate();
    std::string out;
    {
        std::ostringstream header;
        header << "ply\nformat binary_little_endian 1.0\nelement vertex "
               << set.size() << "\n";
        for (const auto& p : expected_properties(set.sh_degree)) {
            header << "property float " << p << "\n";
        }
        header << "end_header\n";
        out = header.str();
    }

    const int per_channel = set.coeffs_per_channel();
    const int rest_per_channel = per_channel - 1;
    const std::size_t floats_per_vertex = 17 + 3 * rest_per_channel;
    std::vector<float> row(floats_per_vertex);
    out.reserve(out.size() + set.size() * floats_per_vertex * sizeof(float));
    for (std::size_t i = 0; i < set.size(); ++i) {
        row[0] = set.means[i][0];
        row[1] = set.means[i][1];
        row[2] = set.means[i][2];
        row[3] = row[4] = row[5] = 0.0f;
        const float* sh = set.sh_coeffs.data() + i * set.sh_width();
        for (int c = 0; c < 3; ++c) {
            row[6 + c] = sh[c * per_channel];
            for (int k = 0; k < rest_per_channel; ++k) {
                row[9 + c * rest_per_channel + k] = sh[c * per_channel + 1 + k];
            }
        }
        const std::size_t base = 9 + 3 * static_cast<std::size_t>(rest_per_channel);
        row[base] = set.opacities[i];
        row[base + 1] = set.log_scales[i][0];
        row[base + 2] = set.log_scales[i][1];
        row[base + 3] = set.log_scales[i][2];
        row[base + 4] = set.rotations[i][0];
        row[base + 5] = set.rotations[i][1];
        row[base + 6] = set.rotations[i][2];
        row[base + 7] = set.rotations[i][3];
        out.append(reinterpret_cast<const char*>(row.data()),
                   floats_per_vertex * sizeof(float));
    }
    atomic_write_file(path, out);
}

}  // namespace artic
