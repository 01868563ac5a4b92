use crate::model::Dimension::{self, *};

/// Quality dimension to expectation pairs, in table order.
pub(super) const MAPPER_TABLE: [(Dimension, &str); 72] = [
    (Uniqueness, "expect_column_values_to_be_unique"),
    (Completeness, "expect_column_values_to_not_be_null"),
    (Completeness, "expect_column_values_to_be_null"),
    (Validity, "expect_column_values_to_be_of_type"),
    (Validity, "expect_column_values_to_be_in_type_list"),
    (Validity, "expect_column_values_to_be_in_set"),
    (Validity, "expect_column_values_to_not_be_in_set"),
    (Validity, "expect_column_values_to_be_between"),
    (Validity, "expect_column_values_to_be_increasing"),
    (Validity, "expect_column_values_to_be_decreasing"),
    (Validity, "expect_column_distinct_values_to_equal_set"),
    (Validity, "expect_column_distinct_values_to_contain_set"),
    (Validity, "expect_column_mean_to_be_between"),
    (Validity, "expect_column_median_to_be_between"),
    (Validity, "expect_column_stdev_to_be_between"),
    (Validity, "expect_column_unique_value_count_to_be_between"),
    (Validity, "expect_column_most_common_value_to_be_in_set"),
    (Validity, "expect_column_sum_to_be_between"),
    (Validity, "expect_column_min_to_be_between"),
    (Validity, "expect_column_max_to_be_between"),
    (Consistency, "expect_column_value_lengths_to_be_between"),
    (Consistency, "expect_column_value_lengths_to_equal"),
    (Consistency, "expect_column_values_to_match_regex"),
    (Consistency, "expect_column_values_to_match_regex_list"),
    (Consistency, "expect_column_values_to_match_like_pattern"),
    (Consistency, "expect_column_values_to_not_match_like_pattern"),
    (Consistency, "expect_column_values_to_match_like_pattern_list"),
    (Consistency, "expect_column_values_to_not_match_like_pattern_list"),
    (Consistency, "expect_column_values_to_match_strftime_format"),
    (Consistency, "expect_column_values_to_be_dateutil_parseable"),
    (Consistency, "expect_column_values_to_be_json_parseable"),
    (Consistency, "expect_column_values_to_match_json_schema"),
    (Timeliness, "expect_column_values_to_not_be_null"),
    (Timeliness, "expect_column_min_to_be_between"),
    (Timeliness, "expect_column_max_to_be_between"),
    (Timeliness, "expect_column_values_to_be_in_set"),
    (Timeliness, "expect_column_values_to_not_be_in_set"),
    (Timeliness, "expect_column_values_to_be_between"),
    (Accuracy, "expect_column_values_to_not_be_null"),
    (Accuracy, "expect_column_values_to_be_null"),
    (Accuracy, "expect_column_values_to_be_of_type"),
    (Accuracy, "expect_column_values_to_be_in_type_list"),
    (Accuracy, "expect_column_values_to_be_in_set"),
    (Accuracy, "expect_column_values_to_not_be_in_set"),
    (Accuracy, "expect_column_values_to_be_between"),
    (Accuracy, "expect_column_values_to_be_increasing"),
    (Accuracy, "expect_column_values_to_be_decreasing"),
    (Accuracy, "expect_column_value_lengths_to_be_between"),
    (Accuracy, "expect_column_value_lengths_to_equal"),
    (Accuracy, "expect_column_values_to_match_regex"),
    (Accuracy, "expect_column_values_to_not_match_regex"),
    (Accuracy, "expect_column_values_to_match_regex_list"),
    (Accuracy, "expect_column_values_to_not_match_regex_list"),
    (Accuracy, "expect_column_values_to_match_like_pattern"),
    (Accuracy, "expect_column_values_to_not_match_like_pattern"),
    (Accuracy, "expect_column_values_to_match_like_pattern_list"),
    (Accuracy, "expect_column_values_to_not_match_like_pattern_list"),
    (Accuracy, "expect_column_values_to_match_strftime_format"),
    (Accuracy, "expect_column_values_to_be_dateutil_parseable"),
    (Accuracy, "expect_column_values_to_be_json_parseable"),
    (Accuracy, "expect_column_values_to_match_json_schema"),
    (Accuracy, "expect_column_distinct_values_to_equal_set"),
    (Accuracy, "expect_column_distinct_values_to_contain_set"),
    (Accuracy, "expect_column_mean_to_be_between"),
    (Accuracy, "expect_column_median_to_be_between"),
    (Accuracy, "expect_column_stdev_to_be_between"),
    (Accuracy, "expect_column_unique_value_count_to_be_between"),
    (Accuracy, "expect_column_most_common_value_to_be_in_set"),
    (Accuracy, "expect_column_sum_to_be_between"),
    (Accuracy, "expect_column_min_to_be_between"),
    (Accuracy, "expect_column_max_to_be_between"),
    (Accuracy, "expect_column_kl_divergence_to_be_less_than"),
];
