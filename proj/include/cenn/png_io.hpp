#ifndef CENN_PNG_IO_HPP
#define CENN_PNG_IO_HPP

#include <csetjmp>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include <png.h>

#include "cenn/grid.hpp"
#include "cenn/io.hpp"

namespace cenn {

// 8-bit grayscale read; color inputs are converted via the libpng RGB-to-gray
// transform.
inline Image read_png(const fs::path& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw std::runtime_error("cannot open " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw std::runtime_error("failed to decode " + path.string());
    }

    png_init_io(png, fp);
    png_read_info(png, info);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if ((png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR) != 0)
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    png_read_update_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    std::vector<png_byte> raster(static_cast<std::size_t>(w) * h);
    std::vector<png_bytep> rows(h);
    for (int r = 0; r < h; ++r) rows[r] = raster.data() + static_cast<std::size_t>(r) * w;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);

    Image img(w, h);
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = gray_to_signal(raster[i]);
    return img;
}

inline Image read_frame(const fs::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".png") return read_png(path);
    return read_pgm(path);
}

}  // namespace cenn

#endif
