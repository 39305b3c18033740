#include "voxelrun/error.hpp"

namespace voxelrun {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::io_error: return "IoError";
    case Errc::header_too_short: return "HeaderTooShort";
    case Errc::bad_sizeof_hdr: return "BadSizeofHdr";
    case Errc::bad_magic: return "BadMagic";
    case Errc::unsupported_datatype: return "UnsupportedDatatype";
    case Errc::invalid_header: return "InvalidHeader";
    case Errc::truncated_data: return "TruncatedData";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::drop_too_many: return "DropTooMany";
    case Errc::singular_affine: return "SingularAffine";
    case Errc::malformed_line: return "MalformedLine";
    case Errc::negative_onset: return "NegativeOnset";
    case Errc::dt_mismatch: return "DtMismatch";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::unsupported_order: return "UnsupportedOrder";
    case Errc::all_zero_column: return "AllZeroColumn";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::degenerate_design: return "DegenerateDesign";
    case Errc::zero_variance: return "ZeroVariance";
    case Errc::zero_contrast: return "ZeroContrast";
    case Errc::constant_regressor: return "ConstantRegressor";
    case Errc::too_few_volumes: return "TooFewVolumes";
    case Errc::too_few_values: return "TooFewValues";
    case Errc::degenerate_after_drop: return "DegenerateAfterDrop";
    case Errc::non_positive: return "NonPositive";
    case Errc::non_positive_voxel_size: return "NonPositiveVoxelSize";
    case Errc::recipe_without_rule: return "RecipeWithoutRule";
    case Errc::duplicate_target: return "DuplicateTarget";
    case Errc::missing_colon: return "MissingColon";
    case Errc::invalid_rule: return "InvalidRule";
    case Errc::cycle_detected: return "CycleDetected";
    case Errc::unknown_target: return "UnknownTarget";
    case Errc::recipe_failed: return "RecipeFailed";
    case Errc::malformed_manifest: return "MalformedManifest";
    case Errc::network_error: return "NetworkError";
    case Errc::digest_mismatch: return "DigestMismatch";
  }
  return "Unknown";
}

RecipeFailed::RecipeFailed(std::string target, std::string line,
                           int exit_status)
    : Error(Errc::recipe_failed,
            "recipe for target '" + target + "' failed (exit " +
                std::to_string(exit_status) + "): " + line),
      target_(std::move(target)),
      line_(std::move(line)),
      exit_status_(exit_status) {}

void fail(Errc code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace voxelrun
