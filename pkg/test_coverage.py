import sys
import unittest
try:
    import coverage
except ImportError:
    print('\n"Coverage.py" is required for coverage tests.')
    sys.exit(-1)

MIN_COVERAGE = 70
SOURCE = 'nlturbo'
REPORT_DIR = 'htmlcov'


def run_tests_with_coverage(pattern='test*.py'):
    """Runs the unit tests under coverage and writes the html report

    :param pattern: file pattern of the test modules
    :type pattern: str
    :return: indicates the tests passed and the coverage reached MIN_COVERAGE
    :rtype: bool
    """
    cov = coverage.Coverage(source=[SOURCE], omit=['*__main__.py'])
    cov.erase()
    cov.start()

    tests = unittest.TestLoader().discover('tests', pattern=pattern)
    result = unittest.TextTestRunner(verbosity=1).run(tests)

    cov.stop()
    cov.save()

    if not result.wasSuccessful():
        return False

    percentage = cov.html_report(directory=REPORT_DIR)
    print(f'{SOURCE} coverage: {percentage:.1f}% (report in {REPORT_DIR})')
    if percentage < MIN_COVERAGE:
        print(f'Coverage of {percentage:.1f}% is below the expected threshold of {MIN_COVERAGE}%', file=sys.stderr)
        return False

    return True


if __name__ == '__main__':
    success = run_tests_with_coverage(*sys.argv[1:2])
    sys.exit(0 if success else 1)
