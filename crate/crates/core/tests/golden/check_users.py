#!/usr/bin/env python3
# Data quality checks for source "users".
# Generated by daqforge from model "Users"; edit the model, not this file.
import os
import sys

import great_expectations as gx


def main():
    context = gx.get_context()
    user = os.environ.get("DAQFORGE_MYSQL_USER", "")
    password = os.environ.get("DAQFORGE_MYSQL_PASSWORD", "")
    connection_string = "mysql+pymysql://" + user + ":" + password + "@localhost/crm"
    datasource = context.sources.add_or_update_sql(name="users", connection_string=connection_string)
    asset = datasource.add_table_asset(name="userinfo", table_name="userinfo")
    batch_request = asset.build_batch_request()
    validator = context.get_validator(batch_request=batch_request)
    results = []
    results.append(("expect_column_values_to_be_unique", "username", validator.expect_column_values_to_be_unique(column="username")))
    results.append(("expect_column_values_to_not_be_null", "username", validator.expect_column_values_to_not_be_null(column="username")))
    failed = 0
    for name, column, result in results:
        if result.success:
            print("PASS " + name + " on " + column)
        else:
            failed += 1
            print("FAIL " + name + " on " + column)
    print(str(len(results) - failed) + " of " + str(len(results)) + " expectations passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
