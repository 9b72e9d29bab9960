#include "artic/png_io.hpp"

#include <zlib.h>

#include <cstdint>

#include "artic/errors.hpp"
#include "artic/io_util.hpp"

namespace artic {

namespace {

void append_u32_be(std::string& out, std::uint32_t value) {
    out.push_back(char((value >> 24) & 0xff));
    out.push_back(char((value >> 16) & 0xff));
    out.push_back(char((value >> 8) & 0xff));
    out.push_back(char(value & 0xff));
}

void append_chunk(std::string& out, const char type[4], const std::string& data) {
    append_u32_be(out, std::uint32_t(data.size()));
    const std::size_t crc_start = out.size();
    out.append(type, 4);
    out.append(data);
    const auto crc =
        crc32(0, reinterpret_cast<const Bytef*>(out.data() + crc_start),
              uInt(out.size() - crc_start));
    append_u32_be(out, std::uint32_t(crc));
}

}  // namespace

std::string encode_png(const Image& image) {
    if (image.channels != 1 && image.channels != 4) {
        throw FormatError("PNG encoder supports 1 or 4 channels, got " +
                          std::to_string(image.channels));
    }
    if (image.width < 1 || image.height < 1 ||
        image.pixels.size() !=
            std::size_t(image.width) * image.height * image.channels) {
        throw FormatError("image buffer does not match its dimensions");
    }

    // Scanlines with filter byte 0 per row.
    const std::size_t row_bytes = std::size_t(image.width) * image.channels;
    std::string raw;
    raw.reserve((row_bytes + 1) * image.height);
    for (int y = 0; y < image.height; ++y) {
        raw.push_back('\0');
        raw.append(reinterpret_cast<const char*>(image.pixels.data() + y * row_bytes),
                   row_bytes);
    }

    uLongf compressed_size = compressBound(uLong(raw.size()));
    std::string compressed(compressed_size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &compressed_size,
                  reinterpret_cast<const Bytef*>(raw.data()), uLong(raw.size()),
                  6) != Z_OK) {
        throw IoError("zlib compression failed");
    }
    compressed.resize(compressed_size);

    std::string ihdr;
    append_u32_be(ihdr, std::uint32_t(image.width));
    append_u32_be(ihdr, std::uint32_t(image.height));
    ihdr.push_back(8);                                   // bit depth
    ihdr.push_back(image.channels == 4 ? char(6) : char(0));  // color type
    ihdr.push_back(0);                                   // compression
    ihdr.push_back(0);                                   // filter
    ihdr.push_back(0);                                   // interlace

    std::string out("\x89PNG\r\n\x1a\n", 8);
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", compressed);
    append_chunk(out, "IEND", "");
    return out;
}

void save_png(const Image& image, const std::filesystem::path& path) {
    atomic_write_file(path, encode_png(image));
}

}  // namespace artic
