#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "contact/contact_metric.hpp"

namespace contact {

// FNV-1a, 64 bit, rendered as "fnv1a64:" followed by 16 hex digits.
std::string content_digest(std::string_view bytes);

struct LoadedManifest {
  ContactModel model;
  std::string digest;
};

// Builds a model from manifest text. Errors raise InvalidManifest with the
// offending field path in the message, e.g. "metric[0][1]: ...".
//
// Besides the documented fields, "name", "domain" and "sampling" (lists of
// [lo, hi]) are accepted; the domain defaults to all of R^d and the sampling
// box to the finite part of the domain or [-1, 1].
LoadedManifest parse_manifest(const std::string& text, const std::string& fallback_name = "manifest");

// Reads the file and calls parse_manifest. Raises InvalidManifest when the
// file cannot be read.
LoadedManifest load_manifest(const std::string& path);

}  // namespace contact
