#pragma once

namespace marginalia::testing {

// Frozen from the first verified runs of the demo bundle and trace.
inline constexpr const char* kDemoFreshDigest = "bfe8cf876a4196bceceb159789825ef71a39eb61ddd61290a93ca13afa5ba806";
inline constexpr const char* kDemoTraceDigest = "4fe7a07893b84d5ba01e8c285242871acc06e5bee249c30e5966aab1f42aff86";
inline constexpr const char* kDemoEndDigest = "62fe6b870776f27fa43174a1eaa06526fb2c7b48aecdeae3d1681762f3fb7288";
inline constexpr const char* kDemoExportSha256 = "4058bba68bc43f35cdc0a09b77fd6f2249e75e9945a963308d32678f8d0b460e";

}  // namespace marginalia::testing
