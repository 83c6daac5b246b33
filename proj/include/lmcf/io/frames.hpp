#pragma once

// Image file I/O (JPEG/PNG through OpenCV), overlay rendering and writing
// sequences in OTB layout. Link against lmcf_io.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "lmcf/dataset.hpp"
#include "lmcf/error.hpp"
#include "lmcf/image.hpp"
#include "lmcf/results.hpp"
#include "lmcf/synthetic.hpp"

namespace lmcf::io {

inline Image from_mat(const cv::Mat& m) {
  if (m.empty() || m.depth() != CV_8U) throw FormatError("image: unsupported pixel format");
  if (m.channels() == 1) {
    Image img(m.cols, m.rows, 1);
    for (int y = 0; y < m.rows; ++y)
      for (int x = 0; x < m.cols; ++x) img.at(x, y) = m.at<std::uint8_t>(y, x);
    return img;
  }
  cv::Mat rgb;
  if (m.channels() == 3) cv::cvtColor(m, rgb, cv::COLOR_BGR2RGB);
  else if (m.channels() == 4) cv::cvtColor(m, rgb, cv::COLOR_BGRA2RGB);
  else throw FormatError("image: unsupported channel count");
  Image img(rgb.cols, rgb.rows, 3);
  for (int y = 0; y < rgb.rows; ++y) {
    const auto* row = rgb.ptr<std::uint8_t>(y);
    std::copy(row, row + 3 * rgb.cols, &img.at(0, y, 0));
  }
  return img;
}

inline cv::Mat to_bgr(const Image& img) {
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      if (img.channels() == 1) {
        row[3 * x] = row[3 * x + 1] = row[3 * x + 2] = img.at(x, y);
      } else {
        row[3 * x] = img.at(x, y, 2);
        row[3 * x + 1] = img.at(x, y, 1);
        row[3 * x + 2] = img.at(x, y, 0);
      }
    }
  }
  return m;
}

// Gray files stay single-channel; colour files decode to RGB.
inline Image read_image(const std::filesystem::path& path) {
  const cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) throw FormatError("image: cannot decode " + path.string());
  return from_mat(m);
}

inline void write_png(const Image& img, const std::filesystem::path& path) {
  if (!cv::imwrite(path.string(), to_bgr(img))) throw Error("image: cannot write " + path.string());
}

// Frame with the predicted box and a corner badge: f_max, APCE, update flag.
inline cv::Mat render_overlay(const Image& frame, const FrameRecord& r) {
  cv::Mat m = to_bgr(frame);
  const cv::Scalar color = r.updated ? cv::Scalar(0, 220, 0) : cv::Scalar(0, 140, 255);
  cv::rectangle(m, cv::Point(static_cast<int>(std::lround(r.box.x)), static_cast<int>(std::lround(r.box.y))),
                cv::Point(static_cast<int>(std::lround(r.box.x + r.box.width)) - 1,
                          static_cast<int>(std::lround(r.box.y + r.box.height)) - 1),
                color, 2);
  char text[128];
  if (r.apce)
    std::snprintf(text, sizeof text, "#%d Fmax %.3f APCE %.1f %s", r.frame_index, r.f_max, *r.apce,
                  r.updated ? "UPD" : "HOLD");
  else
    std::snprintf(text, sizeof text, "#%d Fmax %.3f APCE - %s", r.frame_index, r.f_max,
                  r.updated ? "UPD" : "HOLD");
  int baseline = 0;
  const cv::Size ts = cv::getTextSize(text, cv::FONT_HERSHEY_SIMPLEX, 0.4, 1, &baseline);
  cv::rectangle(m, cv::Point(0, 0), cv::Point(ts.width + 6, ts.height + baseline + 6), cv::Scalar(0, 0, 0),
                cv::FILLED);
  cv::putText(m, text, cv::Point(3, ts.height + 3), cv::FONT_HERSHEY_SIMPLEX, 0.4, cv::Scalar(255, 255, 255), 1,
              cv::LINE_AA);
  return m;
}

inline void write_overlay(const Image& frame, const FrameRecord& r, const std::filesystem::path& path) {
  if (!cv::imwrite(path.string(), render_overlay(frame, r)))
    throw Error("overlay: cannot write " + path.string());
}

// OTB layout: img/0001.png..., groundtruth_rect.txt (1-indexed), attributes.txt.
inline void write_otb(const SyntheticSequence& seq, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "img");
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%04zu.png", i + 1);
    write_png(seq.frames[i], dir / "img" / name);
  }
  std::ofstream gt(dir / "groundtruth_rect.txt");
  for (const Rect& r : seq.ground_truth)
    gt << detail::format_real(r.x + 1.0) << ',' << detail::format_real(r.y + 1.0) << ','
       << detail::format_real(r.width) << ',' << detail::format_real(r.height) << '\n';
  if (!gt) throw Error("synth: cannot write ground truth in " + dir.string());
  if (!seq.attributes.empty()) {
    std::ofstream attr(dir / "attributes.txt");
    attr << "tags = ";
    for (std::size_t i = 0; i < seq.attributes.size(); ++i) attr << (i ? ", " : "") << seq.attributes[i];
    attr << '\n';
  }
}

}  // namespace lmcf::io
