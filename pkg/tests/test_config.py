import logging

from covermonoid import config


def test_positive_int_reads_the_environment(monkeypatch):
    monkeypatch.setenv("COVERMONOID_TEST_VALUE", "8")
    assert config._positive_int("COVERMONOID_TEST_VALUE", 3) == 8
    monkeypatch.delenv("COVERMONOID_TEST_VALUE")
    assert config._positive_int("COVERMONOID_TEST_VALUE", 3) == 3


def test_bad_settings_fall_back_with_a_warning(monkeypatch, caplog):
    caplog.set_level(logging.WARNING, logger="covermonoid.config")
    monkeypatch.setenv("COVERMONOID_TEST_VALUE", "many")
    assert config._positive_int("COVERMONOID_TEST_VALUE", 3) == 1
    monkeypatch.setenv("COVERMONOID_TEST_VALUE", "-2")
    assert config._positive_int("COVERMONOID_TEST_VALUE", 3) == 1
    messages = [record.getMessage() for record in caplog.records]
    assert messages == [
        "COVERMONOID_TEST_VALUE='many' is not an integer, using 1",
        "COVERMONOID_TEST_VALUE=-2 must be positive, using 1",
    ]
